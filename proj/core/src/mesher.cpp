#include "ccm/mesher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ccm {

namespace {

std::vector<Vec2> station_normals(const std::vector<Vec2>& poly) {
  const int n = int(poly.size());
  std::vector<Vec2> seg_n(n - 1);
  for (int i = 0; i + 1 < n; ++i) seg_n[i] = perp_ccw((poly[i + 1] - poly[i]).normalized());
  std::vector<Vec2> out(n);
  out[0] = seg_n[0];
  out[n - 1] = seg_n[n - 2];
  for (int i = 1; i + 1 < n; ++i) out[i] = (seg_n[i - 1] + seg_n[i]).normalized();
  return out;
}

/// Node positions of a member band before any junction trimming:
/// (n_el+1) stations x (n_ew+1) columns, column offset across the width
/// along the left normal of the curve direction.
std::vector<std::vector<Vec2>> band_positions(const std::vector<Vec2>& poly, double width,
                                              int n_ew) {
  const auto normals = station_normals(poly);
  const int n_st = int(poly.size());
  std::vector<std::vector<Vec2>> pos(n_st, std::vector<Vec2>(n_ew + 1));
  for (int i = 0; i < n_st; ++i)
    for (int j = 0; j <= n_ew; ++j)
      pos[i][j] = poly[i] + (double(j) / n_ew - 0.5) * width * normals[i];
  return pos;
}

double gauss_min_jacobian(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  // Bilinear quad with corners a,b,c,d (CCW); 2x2 Gauss points.
  const double g = 1.0 / std::sqrt(3.0);
  double mn = std::numeric_limits<double>::max();
  for (const double xi : {-g, g}) {
    for (const double eta : {-g, g}) {
      const double dN_dxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
      const double dN_deta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
      const Vec2 pts[4] = {a, b, c, d};
      double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
      for (int k = 0; k < 4; ++k) {
        j11 += dN_dxi[k] * pts[k].x();
        j12 += dN_dxi[k] * pts[k].y();
        j21 += dN_deta[k] * pts[k].x();
        j22 += dN_deta[k] * pts[k].y();
      }
      mn = std::min(mn, j11 * j22 - j12 * j21);
    }
  }
  return mn;
}

struct PendingMember {
  ActiveMember member;
  std::vector<std::vector<Vec2>> pos;  // full band positions
  int row_lo = 0, row_hi = -1;         // kept element rows
};

}  // namespace

double QuadMesh::mean_edge_length() const {
  if (elements.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& e : elements)
    for (int s = 0; s < 4; ++s) acc += (nodes[e[(s + 1) % 4]] - nodes[e[s]]).norm();
  return acc / (4.0 * double(elements.size()));
}

double junction_radius(const std::vector<double>& widths) {
  if (widths.empty()) throw MeshError("junction_radius: empty width list");
  const double w = *std::max_element(widths.begin(), widths.end());
  return 0.85 * w / std::sqrt(2.0 - std::sqrt(2.0));
}

QuadMesh flesh_member(const std::vector<Vec2>& polyline, double width, int n_ew,
                      double thickness) {
  if (polyline.size() < 2) throw MeshError("flesh_member: polyline needs at least 2 points");
  if (width <= 0 || n_ew < 1) throw MeshError("flesh_member: invalid width or n_ew");

  QuadMesh mesh;
  mesh.n_el = int(polyline.size()) - 1;
  mesh.n_ew = n_ew;
  mesh.thickness = thickness;

  const auto pos = band_positions(polyline, width, n_ew);
  QuadMesh::MemberPatch mp;
  mp.member_id = 0;
  mp.row_lo = 0;
  mp.row_hi = mesh.n_el - 1;
  mp.width = width;
  mp.node_grid.assign(mesh.n_el + 1, std::vector<int>(n_ew + 1));
  for (int i = 0; i <= mesh.n_el; ++i)
    for (int j = 0; j <= n_ew; ++j) {
      mp.node_grid[i][j] = int(mesh.nodes.size());
      mesh.nodes.push_back(pos[i][j]);
    }
  mp.elem_grid.assign(mesh.n_el, std::vector<int>(n_ew));
  for (int i = 0; i < mesh.n_el; ++i)
    for (int j = 0; j < n_ew; ++j) {
      mp.elem_grid[i][j] = int(mesh.elements.size());
      mesh.elements.push_back({mp.node_grid[i][j], mp.node_grid[i + 1][j],
                               mp.node_grid[i + 1][j + 1], mp.node_grid[i][j + 1]});
      mesh.owners.push_back({QuadMesh::Owner::Kind::Member, 0});
    }
  mesh.member_patches.push_back(std::move(mp));
  check_positive_jacobians(mesh);
  return mesh;
}

namespace {

/// Perimeter index of square-grid node (a,b) on ring r = max(|a|,|b|),
/// counted counter-clockwise from the corner (r,-r).
int ring_perimeter_index(int a, int b, int r) {
  if (a == r && b != r) return b + r;
  if (b == r && a != -r) return 2 * r + (r - a);
  if (a == -r && b != -r) return 4 * r + (r - b);
  return 6 * r + (r + a);
}

struct JunctionBuild {
  int vertex_id = -1;
  Vec2 center;
  double radius = 0;
  std::vector<std::vector<int>> grid;  // (2n+1)^2 node ids, [a+n][b+n]
};

}  // namespace

MeshBuild build_mesh(const CandidateTopology& t, const MeshOptions& opt) {
  MeshBuild out;
  const int n_el = opt.n_el, n_ew = opt.n_ew;
  if (n_el < 1 || n_ew < 1) throw MeshError("build_mesh: n_el and n_ew must be >= 1");

  std::vector<ActiveMember> members = t.members;

  // Stage-1 trimming can consume a short member entirely; dropping it
  // changes junction radii, so recompute until stable.
  std::vector<PendingMember> pend;
  for (;;) {
    pend.clear();
    std::map<int, std::vector<std::pair<int, bool>>> inc;  // vertex -> (idx, at_p0)
    for (size_t i = 0; i < members.size(); ++i) {
      inc[members[i].v0].push_back({int(i), true});
      inc[members[i].v1].push_back({int(i), false});
    }
    std::map<int, double> jrad;
    for (const auto& [v, lst] : inc) {
      if (lst.size() < 2) continue;
      std::vector<double> ws;
      for (const auto& [i, _] : lst) ws.push_back(members[i].width);
      jrad[v] = junction_radius(ws);
    }

    int drop_idx = -1;
    for (size_t i = 0; i < members.size() && drop_idx < 0; ++i) {
      PendingMember pm;
      pm.member = members[i];
      if (int(pm.member.polyline.size()) != n_el + 1)
        pm.member.polyline = hermite_polyline(pm.member.curve, n_el);
      pm.pos = band_positions(pm.member.polyline, pm.member.width, n_ew);

      std::vector<bool> marked(n_el, false);
      auto mark_end = [&](int vertex) {
        auto it = jrad.find(vertex);
        if (it == jrad.end()) return;
        const Vec2 c = t.vertex_pos[vertex];
        const double r2 = it->second * it->second;
        for (int row = 0; row < n_el; ++row) {
          for (int j = 0; j < n_ew; ++j) {
            const Vec2 cen = 0.25 * (pm.pos[row][j] + pm.pos[row + 1][j] + pm.pos[row + 1][j + 1] +
                                     pm.pos[row][j + 1]);
            if ((cen - c).squaredNorm() < r2) {
              marked[row] = true;
              break;
            }
          }
        }
      };
      mark_end(pm.member.v0);
      mark_end(pm.member.v1);

      int lo = 0;
      while (lo < n_el && marked[lo]) ++lo;
      int hi = n_el - 1;
      while (hi >= 0 && marked[hi]) --hi;
      bool interior_mark = false;
      for (int row = lo; row <= hi; ++row) interior_mark |= marked[row];
      if (lo > hi || interior_mark) {
        drop_idx = int(i);
        break;
      }
      pm.row_lo = lo;
      pm.row_hi = hi;
      pend.push_back(std::move(pm));
    }

    if (drop_idx >= 0) {
      out.dropped_members.push_back(members[drop_idx].id);
      out.warnings.push_back("member " + std::to_string(members[drop_idx].id) +
                             " consumed by junction trimming; removed");
      members.erase(members.begin() + drop_idx);
      continue;
    }
    break;
  }

  QuadMesh mesh;
  mesh.n_el = n_el;
  mesh.n_ew = n_ew;
  mesh.thickness = t.thickness;
  if (pend.empty()) return {std::move(mesh), std::move(out.dropped_members),
                            std::move(out.warnings)};

  auto add_node = [&](const Vec2& p) {
    mesh.nodes.push_back(p);
    return int(mesh.nodes.size()) - 1;
  };

  // Member bands over the kept rows.
  for (const auto& pm : pend) {
    QuadMesh::MemberPatch mp;
    mp.member_id = pm.member.id;
    mp.v0 = pm.member.v0;
    mp.v1 = pm.member.v1;
    mp.row_lo = pm.row_lo;
    mp.row_hi = pm.row_hi;
    mp.width = pm.member.width;
    const int rows = mp.rows();
    mp.node_grid.assign(rows + 1, std::vector<int>(n_ew + 1));
    for (int li = 0; li <= rows; ++li)
      for (int j = 0; j <= n_ew; ++j) mp.node_grid[li][j] = add_node(pm.pos[pm.row_lo + li][j]);
    mp.elem_grid.assign(rows, std::vector<int>(n_ew));
    const int patch_idx = int(mesh.member_patches.size());
    for (int li = 0; li < rows; ++li)
      for (int j = 0; j < n_ew; ++j) {
        mp.elem_grid[li][j] = int(mesh.elements.size());
        mesh.elements.push_back({mp.node_grid[li][j], mp.node_grid[li + 1][j],
                                 mp.node_grid[li + 1][j + 1], mp.node_grid[li][j + 1]});
        mesh.owners.push_back({QuadMesh::Owner::Kind::Member, patch_idx});
      }
    mesh.member_patches.push_back(std::move(mp));
  }

  // Junction discs: a (2n_ew+1)^2 square grid mapped ring-by-ring onto
  // concentric circles, so the periphery carries 8*n_ew uniformly spaced
  // nodes and the patch has 4*n_ew^2 elements.
  std::map<int, std::vector<std::pair<int, bool>>> inc;
  for (size_t i = 0; i < pend.size(); ++i) {
    inc[pend[i].member.v0].push_back({int(i), true});
    inc[pend[i].member.v1].push_back({int(i), false});
  }
  std::map<int, int> junction_of_vertex;
  for (const auto& [v, lst] : inc) {
    if (lst.size() < 2) continue;
    std::vector<double> ws;
    for (const auto& [i, _] : lst) ws.push_back(pend[i].member.width);

    QuadMesh::JunctionPatch jp;
    jp.vertex_id = v;
    jp.center = t.vertex_pos[v];
    jp.radius = junction_radius(ws);

    std::vector<std::vector<int>> grid(2 * n_ew + 1, std::vector<int>(2 * n_ew + 1));
    for (int a = -n_ew; a <= n_ew; ++a) {
      for (int b = -n_ew; b <= n_ew; ++b) {
        const int r = std::max(std::abs(a), std::abs(b));
        Vec2 p = jp.center;
        if (r > 0) {
          const int m = ring_perimeter_index(a, b, r);
          const double phi = -kPi / 8.0 + 2.0 * kPi * double(m) / double(8 * r);
          p += jp.radius * (double(r) / n_ew) * unit_dir(phi);
        }
        grid[a + n_ew][b + n_ew] = add_node(p);
        jp.all_nodes.push_back(grid[a + n_ew][b + n_ew]);
      }
    }
    jp.center_node = grid[n_ew][n_ew];
    jp.boundary_nodes.assign(8 * n_ew, -1);
    for (int a = -n_ew; a <= n_ew; ++a)
      for (int b = -n_ew; b <= n_ew; ++b)
        if (std::max(std::abs(a), std::abs(b)) == n_ew)
          jp.boundary_nodes[ring_perimeter_index(a, b, n_ew)] = grid[a + n_ew][b + n_ew];

    const int patch_idx = int(mesh.junction_patches.size());
    for (int a = -n_ew; a < n_ew; ++a)
      for (int b = -n_ew; b < n_ew; ++b) {
        jp.elems.push_back(int(mesh.elements.size()));
        mesh.elements.push_back({grid[a + n_ew][b + n_ew], grid[a + n_ew + 1][b + n_ew],
                                 grid[a + n_ew + 1][b + n_ew + 1], grid[a + n_ew][b + n_ew + 1]});
        mesh.owners.push_back({QuadMesh::Owner::Kind::Junction, patch_idx});
      }
    junction_of_vertex[v] = patch_idx;
    mesh.junction_patches.push_back(std::move(jp));
  }

  // Attach member cut rows to junction arc segments.  Each of the eight
  // segments is centered at angle k*pi/4; a member takes the free segment
  // whose center is nearest to its departure angle (ties by member id).
  std::vector<int> remap(mesh.nodes.size());
  std::iota(remap.begin(), remap.end(), 0);

  for (auto& [v, patch_idx] : junction_of_vertex) {
    auto& jp = mesh.junction_patches[patch_idx];
    const auto& lst = inc[v];

    struct Cand {
      double dist;
      int member_id;
      int pend_idx;
      bool at_p0;
      int segment;
    };
    std::vector<Cand> cands;
    for (const auto& [pi, at_p0] : lst) {
      const auto& am = pend[pi].member;
      const double dep =
          at_p0 ? am.curve.start_angle() : wrap_angle_2pi(am.curve.end_angle() + kPi);
      for (int s = 0; s < 8; ++s) {
        const double d = std::abs(wrap_angle_pi(dep - s * kPi / 4.0));
        cands.push_back({d, am.id, pi, at_p0, s});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.member_id != b.member_id) return a.member_id < b.member_id;
      return a.segment < b.segment;
    });
    std::set<int> member_done;
    std::set<int> seg_taken;
    for (const auto& c : cands) {
      if (member_done.count(c.pend_idx) || seg_taken.count(c.segment)) continue;
      member_done.insert(c.pend_idx);
      seg_taken.insert(c.segment);
      jp.attachments.push_back({c.pend_idx, c.segment, c.at_p0});
    }
    if (member_done.size() != lst.size())
      throw MeshError("junction at vertex " + std::to_string(v) +
                      ": more incident members than arc segments");

    for (const auto& att : jp.attachments) {
      auto& mp = mesh.member_patches[att.member_patch];
      const int station = att.at_p0 ? 0 : mp.rows();
      std::vector<int> periph(n_ew + 1);
      for (int k = 0; k <= n_ew; ++k)
        periph[k] = jp.boundary_nodes[(att.arc_segment * n_ew + k) % (8 * n_ew)];
      // Pick the orientation that matches the cut-row geometry.
      double fwd = 0, rev = 0;
      for (int k = 0; k <= n_ew; ++k) {
        fwd += (mesh.nodes[mp.node_grid[station][k]] - mesh.nodes[periph[k]]).norm();
        rev += (mesh.nodes[mp.node_grid[station][k]] - mesh.nodes[periph[n_ew - k]]).norm();
      }
      if (rev < fwd) std::reverse(periph.begin(), periph.end());
      for (int k = 0; k <= n_ew; ++k) {
        remap[mp.node_grid[station][k]] = periph[k];
        mp.node_grid[station][k] = periph[k];
      }
    }
  }

  for (auto& e : mesh.elements)
    for (int k = 0; k < 4; ++k) e[k] = remap[e[k]];
  for (auto& mp : mesh.member_patches)
    for (auto& row : mp.node_grid)
      for (int& id : row) id = remap[id];

  // Stage 3: relax the first interior member row next to each attachment
  // toward the midpoint of the peripheral node and the second interior row.
  for (const auto& jp : mesh.junction_patches) {
    for (const auto& att : jp.attachments) {
      const auto& mp = mesh.member_patches[att.member_patch];
      if (mp.rows() < 2) continue;
      const int s0 = att.at_p0 ? 0 : mp.rows();
      const int s1 = att.at_p0 ? 1 : mp.rows() - 1;
      const int s2 = att.at_p0 ? 2 : mp.rows() - 2;
      for (int k = 0; k <= n_ew; ++k) {
        const Vec2 p = mesh.nodes[mp.node_grid[s0][k]];
        const Vec2 rr = mesh.nodes[mp.node_grid[s2][k]];
        Vec2& q = mesh.nodes[mp.node_grid[s1][k]];
        q = 0.5 * (q + 0.5 * (p + rr));
      }
    }
  }

  // Stage 4: compress the unattached part of each junction toward the
  // polygon through the attached band corner nodes (compression 0.75).
  for (const auto& jp : mesh.junction_patches) {
    std::set<int> attached;
    std::vector<int> poly_ids;
    for (const auto& att : jp.attachments) {
      for (int k = 0; k <= n_ew; ++k)
        attached.insert(jp.boundary_nodes[(att.arc_segment * n_ew + k) % (8 * n_ew)]);
      for (int k : {0, n_ew}) {
        const int id = jp.boundary_nodes[(att.arc_segment * n_ew + k) % (8 * n_ew)];
        if (std::find(poly_ids.begin(), poly_ids.end(), id) == poly_ids.end())
          poly_ids.push_back(id);
      }
    }
    if (poly_ids.size() < 2) continue;
    std::sort(poly_ids.begin(), poly_ids.end(), [&](int a, int b) {
      const Vec2 da = mesh.nodes[a] - jp.center, db = mesh.nodes[b] - jp.center;
      return std::atan2(da.y(), da.x()) < std::atan2(db.y(), db.x());
    });
    std::vector<Vec2> poly;
    poly.reserve(poly_ids.size());
    for (int id : poly_ids) poly.push_back(mesh.nodes[id]);

    for (int id : jp.all_nodes) {
      if (attached.count(id)) continue;
      Vec2& p = mesh.nodes[id];
      bool outside;
      if (poly.size() == 2) {
        outside = true;  // degenerate 2-gon: everything off the segment moves
      } else {
        outside = !point_in_polygon(poly, p);
      }
      if (outside) {
        const Vec2 cp = poly.size() == 2
                            ? closest_point_on_polygon({poly[0], poly[1]}, p)
                            : closest_point_on_polygon(poly, p);
        p += 0.75 * (cp - p);
      }
    }
  }

  // Compact away the member cut-row nodes orphaned by attachment.
  {
    std::vector<int> newid(mesh.nodes.size(), -1);
    std::vector<Vec2> packed;
    for (const auto& e : mesh.elements)
      for (int k = 0; k < 4; ++k)
        if (newid[e[k]] < 0) {
          newid[e[k]] = int(packed.size());
          packed.push_back(mesh.nodes[e[k]]);
        }
    for (auto& e : mesh.elements)
      for (int k = 0; k < 4; ++k) e[k] = newid[e[k]];
    auto fix = [&](int& id) { id = newid[id]; };
    for (auto& mp : mesh.member_patches)
      for (auto& row : mp.node_grid)
        for (int& id : row) fix(id);
    for (auto& jp : mesh.junction_patches) {
      for (int& id : jp.boundary_nodes) fix(id);
      for (int& id : jp.all_nodes) fix(id);
      fix(jp.center_node);
    }
    mesh.nodes = std::move(packed);
  }

  // Domain-vertex handles: junction centers, or the end cut row of a
  // degree-one member.
  for (const auto& [v, patch_idx] : junction_of_vertex) {
    const auto& jp = mesh.junction_patches[patch_idx];
    mesh.vertex_nodes[v] = {jp.center_node, jp.all_nodes};
  }
  for (const auto& [v, lst] : inc) {
    if (junction_of_vertex.count(v) || lst.empty()) continue;
    const auto& [pi, at_p0] = lst.front();
    const auto& mp = mesh.member_patches[pi];
    const int station = at_p0 ? 0 : mp.rows();
    const auto& row = mp.node_grid[station];
    int rep = row[0];
    double best = (mesh.nodes[rep] - t.vertex_pos[v]).squaredNorm();
    for (int id : row) {
      const double d = (mesh.nodes[id] - t.vertex_pos[v]).squaredNorm();
      if (d < best) {
        best = d;
        rep = id;
      }
    }
    mesh.vertex_nodes[v] = {rep, row};
  }

  check_positive_jacobians(mesh);
  return {std::move(mesh), std::move(out.dropped_members), std::move(out.warnings)};
}

std::array<int, 2> side_nodes(const QuadMesh& mesh, const ElementSide& s) {
  const auto& e = mesh.elements[s.elem];
  const int d = s.side - 1;
  return {e[d], e[(d + 1) % 4]};
}

std::vector<ElementSide> boundary_sides(const QuadMesh& mesh) {
  std::map<std::pair<int, int>, std::pair<int, ElementSide>> edges;
  for (int ei = 0; ei < int(mesh.elements.size()); ++ei) {
    for (int s = 1; s <= 4; ++s) {
      const auto [a, b] = side_nodes(mesh, {ei, s});
      const auto key = std::minmax(a, b);
      auto it = edges.find(key);
      if (it == edges.end()) edges[key] = {1, {ei, s}};
      else it->second.first++;
    }
  }
  std::vector<ElementSide> out;
  for (const auto& [key, v] : edges)
    if (v.first == 1) out.push_back(v.second);
  std::sort(out.begin(), out.end());
  return out;
}

Vec2 element_centroid(const QuadMesh& mesh, int elem) {
  const auto& e = mesh.elements[elem];
  return 0.25 * (mesh.nodes[e[0]] + mesh.nodes[e[1]] + mesh.nodes[e[2]] + mesh.nodes[e[3]]);
}

double element_area(const QuadMesh& mesh, int elem) {
  const auto& e = mesh.elements[elem];
  std::vector<Vec2> p{mesh.nodes[e[0]], mesh.nodes[e[1]], mesh.nodes[e[2]], mesh.nodes[e[3]]};
  return polygon_signed_area(p);
}

double element_min_jacobian(const QuadMesh& mesh, int elem) {
  const auto& e = mesh.elements[elem];
  return gauss_min_jacobian(mesh.nodes[e[0]], mesh.nodes[e[1]], mesh.nodes[e[2]],
                            mesh.nodes[e[3]]);
}

void check_positive_jacobians(const QuadMesh& mesh) {
  for (int ei = 0; ei < int(mesh.elements.size()); ++ei) {
    if (element_min_jacobian(mesh, ei) <= 0.0) {
      std::string what = "non-positive Jacobian in element " + std::to_string(ei);
      if (ei < int(mesh.owners.size())) {
        const auto& o = mesh.owners[ei];
        if (o.kind == QuadMesh::Owner::Kind::Member)
          what += " (member " + std::to_string(mesh.member_patches[o.index].member_id) + ")";
        else
          what += " (junction at vertex " +
                  std::to_string(mesh.junction_patches[o.index].vertex_id) + ")";
      }
      throw MeshError(what);
    }
  }
}

std::vector<SurfaceShape> filter_surfaces_against_mesh(const QuadMesh& mesh,
                                                       const std::vector<SurfaceShape>& surfaces,
                                                       double tol,
                                                       std::vector<int>* removed_ids) {
  std::vector<SurfaceShape> kept;
  for (const auto& s : surfaces) {
    bool hit = false;
    for (int ei = 0; ei < int(mesh.elements.size()) && !hit; ++ei) {
      const Vec2 cen = element_centroid(mesh, ei);
      // Bounding-circle cull: element within reach of the surface?
      const auto& e = mesh.elements[ei];
      double rad = 0;
      for (int k = 0; k < 4; ++k) rad = std::max(rad, (mesh.nodes[e[k]] - cen).norm());
      if ((cen - s.center).norm() > s.bound_radius + rad + tol) continue;
      if (shape_contains_point(s, cen)) {
        hit = true;
        break;
      }
      std::vector<Vec2> quad{mesh.nodes[e[0]], mesh.nodes[e[1]], mesh.nodes[e[2]],
                             mesh.nodes[e[3]]};
      if (polylines_intersect(quad, true, s.boundary, true, tol)) hit = true;
    }
    if (hit) {
      if (removed_ids) removed_ids->push_back(s.id);
    } else {
      kept.push_back(s);
    }
  }
  return kept;
}

QuadMesh apply_wear(const QuadMesh& mesh, const std::vector<ElementSide>& region, double w) {
  if (w < 0.0 || w >= 1.0) throw WearError("apply_wear: wear fraction must be in [0, 1)");
  QuadMesh out = mesh;
  if (w == 0.0 || region.empty()) return out;

  // Per-node inward displacement; average when shared by several region sides.
  std::map<int, std::pair<Vec2, int>> moves;
  for (const auto& rs : region) {
    const auto& e = mesh.elements[rs.elem];
    const int d = rs.side - 1;
    const int pairs[2][2] = {{e[d], e[(d + 3) % 4]}, {e[(d + 1) % 4], e[(d + 2) % 4]}};
    for (const auto& [b, q] : pairs) {
      const Vec2 delta = -w * (mesh.nodes[b] - mesh.nodes[q]);
      auto it = moves.find(b);
      if (it == moves.end()) it = moves.emplace(b, std::make_pair(Vec2(0, 0), 0)).first;
      it->second.first += delta;
      it->second.second += 1;
    }
  }
  for (const auto& [id, acc] : moves) out.nodes[id] += acc.first / double(acc.second);

  for (int ei = 0; ei < int(out.elements.size()); ++ei)
    if (element_min_jacobian(out, ei) <= 0.0)
      throw WearError("apply_wear: wear fraction " + std::to_string(w) +
                      " inverts element " + std::to_string(ei));
  return out;
}

}  // namespace ccm
