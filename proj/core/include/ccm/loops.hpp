#pragma once

// Closed contact-loop identification: stage 1 walks the skeleton to collect
// the member cycle of every face, stage 2 materializes each cycle as an
// ordered run of boundary element sides of the mesh, and the classifier
// pairs loops with external surfaces.

#include <vector>

#include "ccm/domain.hpp"
#include "ccm/mesher.hpp"

namespace ccm {

/// One traversal step: member id and whether it was walked p0 -> p1.
struct PathStep {
  int member_id = -1;
  bool forward = true;
  friend bool operator==(const PathStep&, const PathStep&) = default;
  friend auto operator<=>(const PathStep&, const PathStep&) = default;
};

/// A closed member walk.  A free-end member appears as an immediately
/// repeated pair (out and back).
struct TraversalPath {
  std::vector<PathStep> steps;
  int start_vertex = -1;
};

/// Walk every face of the skeleton: from each junction and incident member,
/// follow the successor whose departure direction is the least
/// counter-clockwise rotation from the reversed arrival direction;
/// duplicate cyclic walks are removed.
std::vector<TraversalPath> trace_paths(const CandidateTopology& t);

struct Loop {
  std::vector<ElementSide> sides;  // ordered closed cycle
  std::vector<int> node_cycle;     // start node of each side
  double signed_area = 0;
  enum class Kind { Outer, Inner } kind = Kind::Inner;
  int path_index = -1;  // the traversal path this loop realizes

  std::vector<Vec2> polygon(const QuadMesh& mesh) const;
};

/// Build one loop per unique path by chaining the mesh boundary sides.
/// Sides are oriented with the solid on the left, so the outer loop has
/// positive signed area and inner loops negative.
std::vector<Loop> build_loops(const std::vector<TraversalPath>& paths, const QuadMesh& mesh);

struct ContactAssignment {
  std::vector<std::vector<int>> surface_groups;        // indices into the surface list
  std::vector<std::pair<int, int>> loop_group_pairs;   // (loop index, group index)
  std::vector<int> self_contact_loops;                 // every loop, by index
};

/// Classify outer/inner loops, union overlapping surfaces into groups, and
/// pair each group with the loop that encloses it (or the outer loop when
/// the group lies outside the continuum).
ContactAssignment classify_and_assign(std::vector<Loop>& loops,
                                      const std::vector<SurfaceShape>& surfaces,
                                      const QuadMesh& mesh, double tol);

}  // namespace ccm
