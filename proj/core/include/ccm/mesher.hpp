#pragma once

// Fleshes a filtered skeleton into a conforming 4-node quadrilateral mesh:
// member bands, circular junction patches (four-stage construction),
// mesh-level surface filtering, and geometric wear shrinking.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ccm/domain.hpp"

namespace ccm {

struct MeshOptions {
  int n_el = 20;  // elements along each member
  int n_ew = 4;   // elements across each member width
};

/// One element side, 1-based: side s connects local nodes s-1 and s%4.
struct ElementSide {
  int elem = -1;
  int side = 0;
  friend bool operator==(const ElementSide&, const ElementSide&) = default;
  friend auto operator<=>(const ElementSide&, const ElementSide&) = default;
};

struct QuadMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 4>> elements;  // counter-clockwise

  struct Owner {
    enum class Kind { Member, Junction };
    Kind kind = Kind::Member;
    int index = -1;  // member_patches / junction_patches index
  };
  std::vector<Owner> owners;

  /// Per-member band bookkeeping.  node_grid is (rows+1) stations along the
  /// length by (n_ew+1) columns across the width; column 0 is the right
  /// flank of the stored curve direction, column n_ew the left flank.
  /// Element (i,j) side 1 runs lengthwise on the j=0 flank, side 3 on the
  /// j=n_ew flank, side 4 at the start cut, side 2 at the end cut, so the
  /// j=0 boundary sides form the member's first lengthwise band and so on.
  struct MemberPatch {
    int member_id = -1;
    int v0 = -1, v1 = -1;
    int row_lo = 0, row_hi = -1;  // kept element rows within [0, n_el)
    double width = 0;
    std::vector<std::vector<int>> node_grid;
    std::vector<std::vector<int>> elem_grid;
    int rows() const { return row_hi - row_lo + 1; }
  };

  struct JunctionPatch {
    int vertex_id = -1;
    Vec2 center{0, 0};
    double radius = 0;
    int center_node = -1;
    /// 8*n_ew peripheral nodes, counter-clockwise, first at angle -pi/8 so
    /// that arc segment s spans indices [s*n_ew, (s+1)*n_ew] and is
    /// centered at angle s*pi/4.
    std::vector<int> boundary_nodes;
    std::vector<int> elems;
    std::vector<int> all_nodes;
    struct Attachment {
      int member_patch = -1;
      int arc_segment = -1;
      bool at_p0 = true;
    };
    std::vector<Attachment> attachments;
  };

  std::vector<MemberPatch> member_patches;
  std::vector<JunctionPatch> junction_patches;

  /// Mesh nodes standing in for a domain vertex: a representative node for
  /// loads/outputs and the node set clamped when the vertex is fixed.
  struct VertexNodes {
    int representative = -1;
    std::vector<int> clamp;
  };
  std::map<int, VertexNodes> vertex_nodes;

  int n_el = 0, n_ew = 0;
  double thickness = 0;  // mm

  double mean_edge_length() const;
};

/// Radius of the circle circumscribing a regular octagon with side equal to
/// 85% of the largest incident member width.
double junction_radius(const std::vector<double>& widths);

/// Standalone member band (no junctions); exposed for direct testing.
/// Throws MeshError when the offset band folds over (non-positive Jacobian).
QuadMesh flesh_member(const std::vector<Vec2>& polyline, double width, int n_ew,
                      double thickness = 1.0);

struct MeshBuild {
  QuadMesh mesh;
  std::vector<int> dropped_members;  // ids consumed entirely by junction trimming
  std::vector<std::string> warnings;
};

/// Full mesh construction for a filtered candidate.  Members consumed
/// entirely by stage-1 junction trimming are dropped (reported, not fatal);
/// the caller is expected to re-filter the skeleton when that happens.
MeshBuild build_mesh(const CandidateTopology& t, const MeshOptions& opt);

/// Remove surfaces that intersect or enclose any mesh element.
std::vector<SurfaceShape> filter_surfaces_against_mesh(const QuadMesh& mesh,
                                                       const std::vector<SurfaceShape>& surfaces,
                                                       double tol,
                                                       std::vector<int>* removed_ids = nullptr);

/// Shrink the lateral width of the boundary elements listed in `region` by
/// the factor (1-w), moving their boundary nodes inward.  Throws WearError
/// if the shrink inverts an element.
QuadMesh apply_wear(const QuadMesh& mesh, const std::vector<ElementSide>& region, double w);

// --- audit helpers ---

std::array<int, 2> side_nodes(const QuadMesh& mesh, const ElementSide& s);
std::vector<ElementSide> boundary_sides(const QuadMesh& mesh);
Vec2 element_centroid(const QuadMesh& mesh, int elem);
double element_area(const QuadMesh& mesh, int elem);
/// Minimum Jacobian determinant over the 2x2 Gauss points.
double element_min_jacobian(const QuadMesh& mesh, int elem);
/// Throws MeshError naming the owning member/junction on failure.
void check_positive_jacobians(const QuadMesh& mesh);

}  // namespace ccm
