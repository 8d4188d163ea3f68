#include "ccm/domain.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace ccm {

namespace {

void add_member(DesignDomain& d, std::map<std::pair<int, int>, int>& seen, int a, int b) {
  const auto key = std::minmax(a, b);
  if (seen.count(key)) return;
  const int id = int(d.members.size());
  seen[key] = id;
  d.members.push_back({id, a, b});
}

}  // namespace

DesignDomain build_grid_domain(int nx, int ny, double block_size, int input_port, int output_port,
                               const std::vector<int>& fixed_vertices, int surf_grid_x,
                               int surf_grid_y, const VariableBounds& bounds) {
  if (nx < 1 || ny < 1) throw ConfigError("build_grid_domain: nx and ny must be >= 1");
  if (block_size <= 0) throw ConfigError("build_grid_domain: block size must be positive");

  DesignDomain d;
  d.nx = nx;
  d.ny = ny;
  d.block_size = block_size;
  d.bounds = bounds;

  // Row-major grid vertices, then row-major block centers.
  auto grid_id = [&](int col, int row) { return row * (nx + 1) + col; };
  for (int row = 0; row <= ny; ++row)
    for (int col = 0; col <= nx; ++col)
      d.vertices.push_back({grid_id(col, row), Vec2(col * block_size, row * block_size), false});
  const int center_base = (nx + 1) * (ny + 1);
  for (int row = 0; row < ny; ++row)
    for (int col = 0; col < nx; ++col)
      d.vertices.push_back({center_base + row * nx + col,
                            Vec2((col + 0.5) * block_size, (row + 0.5) * block_size), false});

  // Per block: bottom, right, top, left edges then the four half-diagonals.
  std::map<std::pair<int, int>, int> seen;
  for (int row = 0; row < ny; ++row) {
    for (int col = 0; col < nx; ++col) {
      const int bl = grid_id(col, row), br = grid_id(col + 1, row);
      const int tl = grid_id(col, row + 1), tr = grid_id(col + 1, row + 1);
      const int c = center_base + row * nx + col;
      add_member(d, seen, bl, br);
      add_member(d, seen, br, tr);
      add_member(d, seen, tl, tr);
      add_member(d, seen, bl, tl);
      add_member(d, seen, bl, c);
      add_member(d, seen, br, c);
      add_member(d, seen, tr, c);
      add_member(d, seen, tl, c);
    }
  }

  d.members_at_vertex.assign(d.vertices.size(), {});
  for (const auto& m : d.members) {
    d.members_at_vertex[m.v0].push_back(m.id);
    d.members_at_vertex[m.v1].push_back(m.id);
  }

  auto check_vertex = [&](int id, const char* what) {
    if (id < 0 || id >= d.n_vertices())
      throw ConfigError(std::string("build_grid_domain: invalid ") + what + " vertex id " +
                        std::to_string(id));
  };
  check_vertex(input_port, "input port");
  check_vertex(output_port, "output port");
  if (input_port == output_port)
    throw ConfigError("build_grid_domain: input and output ports must differ");
  d.input_port = input_port;
  d.output_port = output_port;

  if (fixed_vertices.empty())
    throw ConfigError("build_grid_domain: at least one fixed vertex is required");
  for (int id : fixed_vertices) {
    check_vertex(id, "fixed");
    d.vertices[id].fixed = true;
  }

  if (surf_grid_x > 0 && surf_grid_y > 0) {
    const double sx = d.width() / surf_grid_x;
    const double sy = d.height() / surf_grid_y;
    for (int row = 0; row < surf_grid_y; ++row)
      for (int col = 0; col < surf_grid_x; ++col)
        d.surface_centers.push_back(Vec2((col + 0.5) * sx, (row + 0.5) * sy));
  }

  return d;
}

int vector_size(const DesignDomain& d) { return layout_of(d).size(); }

EntryInfo entry_info(const DesignDomain& d, int idx) {
  const VectorLayout lay = layout_of(d);
  const VariableBounds& b = d.bounds;
  if (idx < 0 || idx >= lay.size()) throw ConfigError("entry_info: index out of range");

  if (idx < 4 * lay.n_members) {
    switch (idx % 4) {
      case 0: return {EntryKind::PresenceFlag, 0, 1};
      case 1:
      case 2: return {EntryKind::Continuous, b.slope_lo, b.slope_hi};
      default: return {EntryKind::Continuous, b.width_lo, b.width_hi};
    }
  }
  if (idx == lay.thickness()) return {EntryKind::Continuous, b.thickness_lo, b.thickness_hi};
  if (idx < lay.surf_base(0)) return {EntryKind::Continuous, b.offset_lo, b.offset_hi};
  if (idx == lay.force()) return {EntryKind::Continuous, b.force_lo, b.force_hi};

  const int off = (idx - lay.surf_base(0)) % 8;
  switch (off) {
    case 0: return {EntryKind::PresenceFlag, 0, 1};
    case 1: return {EntryKind::ShapeSelector, 1, 3};
    case 2: return {EntryKind::Continuous, b.center_x_lo, b.center_x_hi};
    case 3: return {EntryKind::Continuous, b.center_y_lo, b.center_y_hi};
    case 4: return {EntryKind::Continuous, b.radius_lo, b.radius_hi};
    case 5:
    case 6: return {EntryKind::Continuous, b.factor_lo, b.factor_hi};
    default: return {EntryKind::Continuous, b.orient_lo, b.orient_hi};
  }
}

DesignVector initial_vector(const DesignDomain& d) {
  const VectorLayout lay = layout_of(d);
  DesignVector v(lay.size());
  for (int i = 0; i < lay.size(); ++i) {
    const EntryInfo info = entry_info(d, i);
    switch (info.kind) {
      case EntryKind::PresenceFlag: v[i] = 1.0; break;
      case EntryKind::ShapeSelector: v[i] = 2.0; break;
      case EntryKind::Continuous: v[i] = 0.5 * (info.lo + info.hi); break;
    }
  }
  for (int k = 0; k < lay.n_surfaces; ++k) {
    v[lay.surf_x(k)] = d.surface_centers[k].x();
    v[lay.surf_y(k)] = d.surface_centers[k].y();
  }
  return v;
}

void check_vector(const DesignDomain& d, const DesignVector& v) {
  const VectorLayout lay = layout_of(d);
  if (int(v.size()) != lay.size())
    throw ConfigError("design vector length " + std::to_string(v.size()) + " != expected " +
                      std::to_string(lay.size()));
  for (int i = 0; i < lay.size(); ++i) {
    const EntryInfo info = entry_info(d, i);
    const double x = v[i];
    switch (info.kind) {
      case EntryKind::PresenceFlag:
        if (x != 0.0 && x != 1.0)
          throw ConfigError("design vector entry " + std::to_string(i) + " is not a 0/1 flag");
        break;
      case EntryKind::ShapeSelector:
        if (x != 1.0 && x != 2.0 && x != 3.0)
          throw ConfigError("design vector entry " + std::to_string(i) +
                            " is not a valid shape selector");
        break;
      case EntryKind::Continuous:
        if (!(x >= info.lo - 1e-12 && x <= info.hi + 1e-12))
          throw ConfigError("design vector entry " + std::to_string(i) + " out of bounds");
        break;
    }
  }
}

bool CandidateTopology::member_active(int member_id) const {
  return std::any_of(members.begin(), members.end(),
                     [&](const ActiveMember& m) { return m.id == member_id; });
}

CandidateTopology decode(const DesignDomain& d, const DesignVector& v, int n_el) {
  check_vector(d, v);
  const VectorLayout lay = layout_of(d);

  CandidateTopology t;
  t.thickness = v[lay.thickness()];
  t.force_magnitude = v[lay.force()];

  t.vertex_pos.resize(d.n_vertices());
  for (int i = 0; i < d.n_vertices(); ++i) {
    const double dx = std::clamp(v[lay.vertex_dx(i)], d.bounds.offset_lo, d.bounds.offset_hi);
    const double dy = std::clamp(v[lay.vertex_dy(i)], d.bounds.offset_lo, d.bounds.offset_hi);
    t.vertex_pos[i] = d.vertices[i].base + Vec2(dx, dy);
  }

  for (int j = 0; j < d.n_members(); ++j) {
    if (v[lay.member_flag(j)] < 0.5) continue;
    ActiveMember m;
    m.id = j;
    m.v0 = d.members[j].v0;
    m.v1 = d.members[j].v1;
    m.curve.p0 = t.vertex_pos[m.v0];
    m.curve.p1 = t.vertex_pos[m.v1];
    m.curve.tau0 = v[lay.member_slope0(j)];
    m.curve.tau1 = v[lay.member_slope1(j)];
    m.width = v[lay.member_width(j)];
    m.polyline = hermite_polyline(m.curve, n_el);
    t.members.push_back(std::move(m));
  }

  for (int k = 0; k < d.n_surfaces(); ++k) {
    if (v[lay.surf_flag(k)] < 0.5) continue;
    SurfaceGenes g;
    g.kind = ShapeKind(int(v[lay.surf_shape(k)]));
    g.center = Vec2(v[lay.surf_x(k)], v[lay.surf_y(k)]);
    g.bound_radius = v[lay.surf_radius(k)];
    g.f1 = v[lay.surf_f1(k)];
    g.f2 = v[lay.surf_f2(k)];
    g.theta = v[lay.surf_theta(k)];
    SurfaceShape s = realize_surface(g);
    s.id = k;
    t.surfaces.push_back(std::move(s));
  }

  return t;
}

namespace {

bool member_hits_surface(const ActiveMember& m, const SurfaceShape& s, double tol) {
  if (polylines_intersect(m.polyline, false, s.boundary, true, tol)) return true;
  // A member fully inside a surface has no boundary crossing; test a point.
  return shape_contains_point(s, m.polyline[m.polyline.size() / 2]);
}

bool members_cross(const ActiveMember& a, const ActiveMember& b, double tol) {
  // Shared skeleton vertices are incidences, not crossings.
  std::vector<Vec2> shared;
  if (a.v0 == b.v0 || a.v0 == b.v1) shared.push_back(a.curve.p0);
  if (a.v1 == b.v0 || a.v1 == b.v1) shared.push_back(a.curve.p1);
  return polylines_intersect(a.polyline, false, b.polyline, false, tol, shared);
}

}  // namespace

CandidateTopology filter_candidate(const DesignDomain& d, CandidateTopology t) {
  const double tol = intersection_tol(d);

  bool changed = true;
  while (changed) {
    changed = false;

    // (a) members intersecting active surfaces
    {
      std::vector<ActiveMember> kept;
      kept.reserve(t.members.size());
      for (auto& m : t.members) {
        bool hit = false;
        for (const auto& s : t.surfaces) {
          if (member_hits_surface(m, s, tol)) {
            hit = true;
            break;
          }
        }
        if (!hit) kept.push_back(std::move(m));
        else changed = true;
      }
      t.members = std::move(kept);
    }

    // (b) mutually intersecting member pairs: both go
    {
      std::vector<bool> drop(t.members.size(), false);
      for (size_t i = 0; i < t.members.size(); ++i) {
        for (size_t j = i + 1; j < t.members.size(); ++j) {
          if (members_cross(t.members[i], t.members[j], tol)) drop[i] = drop[j] = true;
        }
      }
      std::vector<ActiveMember> kept;
      kept.reserve(t.members.size());
      for (size_t i = 0; i < t.members.size(); ++i) {
        if (!drop[i]) kept.push_back(std::move(t.members[i]));
        else changed = true;
      }
      t.members = std::move(kept);
    }

    // (c) keep only the component containing the output port
    {
      std::vector<int> comp(d.n_vertices(), -1);
      std::vector<int> stack{d.output_port};
      comp[d.output_port] = 0;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& m : t.members) {
          int other = -1;
          if (m.v0 == v) other = m.v1;
          else if (m.v1 == v) other = m.v0;
          if (other >= 0 && comp[other] < 0) {
            comp[other] = 0;
            stack.push_back(other);
          }
        }
      }
      std::vector<ActiveMember> kept;
      kept.reserve(t.members.size());
      for (auto& m : t.members) {
        if (comp[m.v0] == 0 && comp[m.v1] == 0) kept.push_back(std::move(m));
        else changed = true;
      }
      t.members = std::move(kept);
    }
  }
  return t;
}

ValidityReport validate(const DesignDomain& d, const CandidateTopology& t) {
  ValidityReport r;
  for (const auto& m : t.members) {
    if (m.v0 == d.input_port || m.v1 == d.input_port) r.input_present = true;
    if (m.v0 == d.output_port || m.v1 == d.output_port) r.output_present = true;
    if (d.vertices[m.v0].fixed || d.vertices[m.v1].fixed) r.fixed_present = true;
  }
  return r;
}

}  // namespace ccm
