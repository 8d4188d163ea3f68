#pragma once

// Ground-structure design domain, the flat mixed discrete/continuous design
// vector, and decoding/filtering of candidate topologies.

#include <utility>
#include <vector>

#include "ccm/geometry.hpp"
#include "ccm/types.hpp"

namespace ccm {

struct DomainVertex {
  int id = -1;
  Vec2 base{0, 0};
  bool fixed = false;
};

struct DomainMember {
  int id = -1;
  int v0 = -1, v1 = -1;
};

/// Lower/upper bounds of the continuous design variables.
struct VariableBounds {
  double slope_lo = -0.5, slope_hi = 0.5;        // rad
  double width_lo = 2.0, width_hi = 6.0;         // mm
  double thickness_lo = 6.0, thickness_hi = 6.0; // mm
  double offset_lo = -20.0, offset_hi = 20.0;    // mm, vertex box (both axes)
  double center_x_lo = 0.0, center_x_hi = 450.0; // mm
  double center_y_lo = 0.0, center_y_hi = 450.0; // mm
  double radius_lo = 10.0, radius_hi = 50.0;     // mm, bounding circle
  double factor_lo = 0.1, factor_hi = 1.0;
  double orient_lo = 0.0, orient_hi = kPi;       // rad
  double force_lo = 0.0, force_hi = 10.0;        // N
};

/// The fixed grid of candidate members and vertices.  A nx-by-ny block grid
/// has (nx+1)(ny+1) grid vertices plus one center vertex per block; each
/// block contributes its four edges (shared edges counted once) and four
/// corner-to-center half-diagonals.
struct DesignDomain {
  int nx = 0, ny = 0;
  double block_size = 0;  // mm
  std::vector<DomainVertex> vertices;
  std::vector<DomainMember> members;
  std::vector<std::vector<int>> members_at_vertex;  // incidence lists
  int input_port = -1;
  int output_port = -1;
  VariableBounds bounds;
  std::vector<Vec2> surface_centers;  // initial centers of candidate surfaces

  int n_members() const { return int(members.size()); }
  int n_vertices() const { return int(vertices.size()); }
  int n_surfaces() const { return int(surface_centers.size()); }
  double width() const { return nx * block_size; }
  double height() const { return ny * block_size; }
};

/// Deterministic construction: row-major grid vertices, then row-major
/// block centers; members added per block (edges then half-diagonals),
/// shared edges only once.  Candidate surface centers are laid out on a
/// uniform surf_grid_x-by-surf_grid_y grid over the domain.
/// Throws ConfigError for invalid port/support ids.
DesignDomain build_grid_domain(int nx, int ny, double block_size, int input_port, int output_port,
                               const std::vector<int>& fixed_vertices, int surf_grid_x,
                               int surf_grid_y, const VariableBounds& bounds = {});

/// Flat design-vector layout:
///   per member:  [presence, slope0, slope1, width]
///   global:      [thickness]
///   per vertex:  [dx, dy]
///   per surface: [presence, shape, cx, cy, R, f1, f2, theta]
///   global:      [force]
struct VectorLayout {
  int n_members = 0, n_vertices = 0, n_surfaces = 0;

  int size() const { return n_members * 4 + 1 + n_vertices * 2 + n_surfaces * 8 + 1; }
  int member_flag(int j) const { return 4 * j; }
  int member_slope0(int j) const { return 4 * j + 1; }
  int member_slope1(int j) const { return 4 * j + 2; }
  int member_width(int j) const { return 4 * j + 3; }
  int thickness() const { return 4 * n_members; }
  int vertex_dx(int i) const { return 4 * n_members + 1 + 2 * i; }
  int vertex_dy(int i) const { return 4 * n_members + 1 + 2 * i + 1; }
  int surf_base(int k) const { return 4 * n_members + 1 + 2 * n_vertices + 8 * k; }
  int surf_flag(int k) const { return surf_base(k); }
  int surf_shape(int k) const { return surf_base(k) + 1; }
  int surf_x(int k) const { return surf_base(k) + 2; }
  int surf_y(int k) const { return surf_base(k) + 3; }
  int surf_radius(int k) const { return surf_base(k) + 4; }
  int surf_f1(int k) const { return surf_base(k) + 5; }
  int surf_f2(int k) const { return surf_base(k) + 6; }
  int surf_theta(int k) const { return surf_base(k) + 7; }
  int force() const { return size() - 1; }
};

using DesignVector = std::vector<double>;

inline VectorLayout layout_of(const DesignDomain& d) {
  return VectorLayout{d.n_members(), d.n_vertices(), d.n_surfaces()};
}

/// N_m*4 + 1 + N_p*2 + N_s*8 + 1.
int vector_size(const DesignDomain& d);

/// Whether the entry at `idx` is a binary presence flag, the 3-valued shape
/// selector, or a continuous variable (with its bounds).
enum class EntryKind { PresenceFlag, ShapeSelector, Continuous };
struct EntryInfo {
  EntryKind kind;
  double lo, hi;  // meaningful for Continuous
};
EntryInfo entry_info(const DesignDomain& d, int idx);

/// All presence flags on, continuous variables at bound midpoints, shape
/// selectors at 2, surface centers at their initial placements.
DesignVector initial_vector(const DesignDomain& d);

/// Throws ConfigError on length mismatch or out-of-bounds entries.
void check_vector(const DesignDomain& d, const DesignVector& v);

/// One active member with resolved geometry.
struct ActiveMember {
  int id = -1;
  int v0 = -1, v1 = -1;
  HermiteMember curve;
  double width = 0;                // mm
  std::vector<Vec2> polyline;      // n_el segments along the arc
};

/// Decoded candidate: active members and surfaces plus resolved vertex
/// positions.  No filtering applied yet.
struct CandidateTopology {
  std::vector<ActiveMember> members;
  std::vector<SurfaceShape> surfaces;
  std::vector<Vec2> vertex_pos;  // all domain vertices, base + clamped offset
  double thickness = 0;          // mm
  double force_magnitude = 0;    // N

  bool member_active(int member_id) const;
};

/// Decode a design vector.  `n_el` fixes the skeleton polyline sampling used
/// later for intersection tests and meshing.
CandidateTopology decode(const DesignDomain& d, const DesignVector& v, int n_el);

/// Remove, to a fixed point: (a) members whose skeleton intersects or lies
/// inside an active surface, (b) mutually intersecting member pairs (both),
/// (c) members not connected to the output-port component.
CandidateTopology filter_candidate(const DesignDomain& d, CandidateTopology t);

struct ValidityReport {
  bool input_present = false;
  bool output_present = false;
  bool fixed_present = false;
  bool valid() const { return input_present && output_present && fixed_present; }
};

ValidityReport validate(const DesignDomain& d, const CandidateTopology& t);

/// Intersection tolerance used by the filters: 1e-6 * block size.
inline double intersection_tol(const DesignDomain& d) { return 1e-6 * d.block_size; }

}  // namespace ccm
