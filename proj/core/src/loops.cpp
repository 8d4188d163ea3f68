#include "ccm/loops.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace ccm {

namespace {

/// Departure direction angle of member m when leaving `vertex`.
double departure_angle(const ActiveMember& m, int vertex) {
  if (vertex == m.v0) return wrap_angle_2pi(m.curve.start_angle());
  return wrap_angle_2pi(m.curve.end_angle() + kPi);
}

/// Canonical form of a cyclic step sequence: the lexicographically smallest
/// rotation.
std::vector<PathStep> canonical_rotation(const std::vector<PathStep>& steps) {
  const size_t n = steps.size();
  std::vector<PathStep> best = steps;
  std::vector<PathStep> rot = steps;
  for (size_t k = 1; k < n; ++k) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

}  // namespace

std::vector<TraversalPath> trace_paths(const CandidateTopology& t) {
  std::vector<TraversalPath> out;
  if (t.members.empty()) return out;

  // Incidence over active members only.
  std::map<int, std::vector<int>> inc;  // vertex -> member indices
  for (size_t i = 0; i < t.members.size(); ++i) {
    inc[t.members[i].v0].push_back(int(i));
    inc[t.members[i].v1].push_back(int(i));
  }
  std::vector<int> junctions;
  for (const auto& [v, lst] : inc)
    if (lst.size() >= 2) junctions.push_back(v);
  // A lone dangling member has no junction; start from its lowest vertex so
  // its boundary still becomes one loop.
  if (junctions.empty()) junctions.push_back(inc.begin()->first);

  auto successor = [&](int at_vertex, double arrival_dir) {
    // Least counter-clockwise rotation from the reversed arrival direction;
    // a full turn (the arrival member itself) ranks last, which reproduces
    // free-end backtracking at degree-1 vertices.
    const double back = wrap_angle_2pi(arrival_dir + kPi);
    int best = -1;
    double best_rot = 0;
    for (int mi : inc[at_vertex]) {
      const double dep = departure_angle(t.members[mi], at_vertex);
      double rot = wrap_angle_2pi(dep - back);
      if (rot <= 1e-12) rot = 2.0 * kPi;
      if (best < 0 || rot < best_rot ||
          (rot == best_rot && t.members[mi].id < t.members[best].id)) {
        best = mi;
        best_rot = rot;
      }
    }
    return best;
  };

  std::set<std::vector<PathStep>> seen;
  const size_t step_cap = 4 * t.members.size() + 8;

  for (int start_vertex : junctions) {
    // First walk starts along the member with the minimum counter-clockwise
    // angle from the positive x axis, then every other incident member.
    std::vector<int> order = inc[start_vertex];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = departure_angle(t.members[a], start_vertex);
      const double db = departure_angle(t.members[b], start_vertex);
      if (da != db) return da < db;
      return t.members[a].id < t.members[b].id;
    });

    for (int first : order) {
      TraversalPath path;
      path.start_vertex = start_vertex;
      int at = start_vertex;
      int mi = first;
      while (true) {
        const auto& m = t.members[mi];
        const bool fwd = (at == m.v0);
        path.steps.push_back({m.id, fwd});
        const int next_vertex = fwd ? m.v1 : m.v0;
        // Direction of travel into next_vertex: opposite of the departure
        // direction back out along the same member.
        const double travel_dir = wrap_angle_2pi(departure_angle(m, next_vertex) + kPi);
        const int next = successor(next_vertex, travel_dir);
        if (next_vertex == start_vertex && next == first) {
          // Wrapped: the successor must also repeat the first direction.
          const auto& fm = t.members[next];
          const bool next_fwd = (next_vertex == fm.v0);
          if (PathStep{fm.id, next_fwd} == path.steps.front()) break;
        }
        at = next_vertex;
        mi = next;
        if (path.steps.size() > step_cap)
          throw LoopError("trace_paths: walk did not close (start vertex " +
                          std::to_string(start_vertex) + ")");
      }
      auto canon = canonical_rotation(path.steps);
      if (seen.insert(canon).second) out.push_back(std::move(path));
    }
  }
  return out;
}

std::vector<Vec2> Loop::polygon(const QuadMesh& mesh) const {
  std::vector<Vec2> poly;
  poly.reserve(node_cycle.size());
  for (int id : node_cycle) poly.push_back(mesh.nodes[id]);
  return poly;
}

std::vector<Loop> build_loops(const std::vector<TraversalPath>& paths, const QuadMesh& mesh) {
  // Chain boundary sides into closed cycles.  Sides keep their element
  // orientation (solid on the left).
  const auto bsides = boundary_sides(mesh);
  std::map<int, ElementSide> outgoing;  // start node -> side
  for (const auto& s : bsides) {
    const auto [a, b] = side_nodes(mesh, s);
    if (outgoing.count(a))
      throw LoopError("mesh boundary is not manifold at node " + std::to_string(a));
    outgoing[a] = s;
  }

  std::vector<Loop> cycles;
  std::map<std::pair<int, int>, int> cycle_of_side;  // (min,max) node key -> cycle idx
  std::set<int> visited_starts;
  for (const auto& seed : bsides) {
    const auto [seed_a, seed_b] = side_nodes(mesh, seed);
    if (visited_starts.count(seed_a)) continue;
    Loop loop;
    int node = seed_a;
    while (true) {
      auto it = outgoing.find(node);
      if (it == outgoing.end())
        throw LoopError("open mesh boundary at node " + std::to_string(node));
      const ElementSide s = it->second;
      const auto [a, b] = side_nodes(mesh, s);
      loop.sides.push_back(s);
      loop.node_cycle.push_back(a);
      cycle_of_side[std::minmax(a, b)] = int(cycles.size());
      visited_starts.insert(a);
      node = b;
      if (node == seed_a) break;
      if (loop.sides.size() > bsides.size())
        throw LoopError("boundary walk did not close");
    }
    loop.signed_area = polygon_signed_area(loop.polygon(mesh));
    cycles.push_back(std::move(loop));
  }

  // Associate each unique path with the cycle holding its first member's
  // right-of-travel flank: the successor rule (least counter-clockwise
  // rotation from the reversed arrival) walks each face with the face on
  // the right.
  std::map<int, int> patch_of_member;
  for (size_t i = 0; i < mesh.member_patches.size(); ++i)
    patch_of_member[mesh.member_patches[i].member_id] = int(i);

  std::vector<Loop> out;
  std::set<int> claimed;
  for (size_t pi = 0; pi < paths.size(); ++pi) {
    const auto& path = paths[pi];
    int cycle_idx = -1;
    for (const auto& step : path.steps) {
      auto pit = patch_of_member.find(step.member_id);
      if (pit == patch_of_member.end()) continue;  // dropped while meshing
      const auto& mp = mesh.member_patches[pit->second];
      const int col = step.forward ? 0 : mesh.n_ew;
      const int mid = mp.rows() / 2;
      const auto key = std::minmax(mp.node_grid[mid][col], mp.node_grid[mid + 1][col]);
      auto cit = cycle_of_side.find(key);
      if (cit == cycle_of_side.end())
        throw LoopError("member " + std::to_string(step.member_id) +
                        " lateral band is not on the mesh boundary");
      cycle_idx = cit->second;
      break;
    }
    if (cycle_idx < 0) continue;  // path made entirely of dropped members
    if (claimed.count(cycle_idx))
      throw LoopError("two paths mapped to one boundary cycle");
    claimed.insert(cycle_idx);
    Loop loop = cycles[cycle_idx];
    loop.path_index = int(pi);
    out.push_back(std::move(loop));
  }

  if (claimed.size() != cycles.size())
    throw LoopError("unclaimed boundary cycle: path/boundary mismatch");

  return out;
}

ContactAssignment classify_and_assign(std::vector<Loop>& loops,
                                      const std::vector<SurfaceShape>& surfaces,
                                      const QuadMesh& mesh, double tol) {
  ContactAssignment out;
  if (loops.empty()) return out;

  // Outer loop: largest absolute signed area.
  size_t outer = 0;
  for (size_t i = 1; i < loops.size(); ++i)
    if (std::abs(loops[i].signed_area) > std::abs(loops[outer].signed_area)) outer = i;
  for (size_t i = 0; i < loops.size(); ++i)
    loops[i].kind = (i == outer) ? Loop::Kind::Outer : Loop::Kind::Inner;

  for (size_t i = 0; i < loops.size(); ++i) out.self_contact_loops.push_back(int(i));

  if (surfaces.empty()) return out;

  // Union overlapping surfaces.
  const int n = int(surfaces.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (shapes_overlap(surfaces[i], surfaces[j], tol)) parent[find(i)] = find(j);

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  // Canonical ordering: groups by smallest surface id, members by id.
  std::vector<std::vector<int>> glist;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return surfaces[a].id < surfaces[b].id; });
    glist.push_back(members);
  }
  std::sort(glist.begin(), glist.end(),
            [&](const auto& a, const auto& b) { return surfaces[a[0]].id < surfaces[b[0]].id; });
  out.surface_groups = std::move(glist);

  const auto outer_poly = loops[outer].polygon(mesh);
  for (size_t g = 0; g < out.surface_groups.size(); ++g) {
    // Area-weighted centroid over the group's member shapes.
    Vec2 cen(0, 0);
    double area = 0;
    for (int si : out.surface_groups[g]) {
      const double a = std::abs(polygon_signed_area(surfaces[si].boundary));
      Vec2 c(0, 0);
      for (const auto& p : surfaces[si].boundary) c += p;
      c /= double(surfaces[si].boundary.size());
      cen += a * c;
      area += a;
    }
    cen /= area;

    int paired = -1;
    for (size_t i = 0; i < loops.size(); ++i) {
      if (i == outer) continue;
      if (point_in_polygon(loops[i].polygon(mesh), cen)) {
        paired = int(i);
        break;
      }
    }
    if (paired < 0) {
      if (!point_in_polygon(outer_poly, cen)) {
        paired = int(outer);
      } else {
        throw LoopError("surface group straddles the continuum; it should have been filtered");
      }
    }
    out.loop_group_pairs.push_back({paired, int(g)});
  }
  return out;
}

}  // namespace ccm
