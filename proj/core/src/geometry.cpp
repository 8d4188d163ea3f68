#include "ccm/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ccm {

Vec2 HermiteMember::point(double t) const {
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double len = chord_length();
  const Vec2 m0 = len * unit_dir(start_angle());
  const Vec2 m1 = len * unit_dir(end_angle());
  return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
}

Vec2 HermiteMember::tangent(double t) const {
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  const double len = chord_length();
  const Vec2 m0 = len * unit_dir(start_angle());
  const Vec2 m1 = len * unit_dir(end_angle());
  return d00 * p0 + d10 * m0 + d01 * p1 + d11 * m1;
}

std::vector<Vec2> hermite_polyline(const HermiteMember& m, int n_el) {
  if (n_el < 1) throw GeometryError("hermite_polyline: n_el must be >= 1");
  if (m.chord_length() <= 1e-12)
    throw GeometryError("hermite_polyline: degenerate member (coincident endpoints)");

  // Dense arc-length table, then invert for equal spacing.
  constexpr int kTable = 2048;
  std::vector<double> s(kTable + 1, 0.0);
  Vec2 prev = m.p0;
  for (int i = 1; i <= kTable; ++i) {
    const Vec2 q = m.point(double(i) / kTable);
    s[i] = s[i - 1] + (q - prev).norm();
    prev = q;
  }
  const double total = s[kTable];

  std::vector<Vec2> pts(n_el + 1);
  pts[0] = m.p0;
  pts[n_el] = m.p1;
  int seg = 0;
  for (int k = 1; k < n_el; ++k) {
    const double target = total * double(k) / n_el;
    while (seg < kTable - 1 && s[seg + 1] < target) ++seg;
    const double ds = s[seg + 1] - s[seg];
    const double frac = ds > 0 ? (target - s[seg]) / ds : 0.0;
    const double t = (seg + frac) / kTable;
    pts[k] = m.point(t);
  }
  return pts;
}

namespace {

std::vector<Vec2> conic_boundary(const Vec2& c, double a, double b, double theta, int n) {
  std::vector<Vec2> pts(n);
  const double ct = std::cos(theta), st = std::sin(theta);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    const double x = a * std::cos(t), y = b * std::sin(t);
    pts[i] = c + Vec2(ct * x - st * y, st * x + ct * y);
  }
  return pts;
}

std::vector<Vec2> rectangle_boundary(const Vec2& c, double hx, double hy, double theta,
                                     double max_seg_len) {
  const double ct = std::cos(theta), st = std::sin(theta);
  auto world = [&](double x, double y) -> Vec2 {
    return c + Vec2(ct * x - st * y, st * x + ct * y);
  };
  const Vec2 corners[4] = {world(hx, hy), world(-hx, hy), world(-hx, -hy), world(hx, -hy)};
  std::vector<Vec2> pts;
  for (int e = 0; e < 4; ++e) {
    const Vec2& q0 = corners[e];
    const Vec2& q1 = corners[(e + 1) % 4];
    const double len = (q1 - q0).norm();
    int n = 1;
    if (max_seg_len > 0) n = std::max(1, int(std::ceil(len / max_seg_len)));
    for (int i = 0; i < n; ++i) pts.push_back(q0 + (q1 - q0) * (double(i) / n));
  }
  return pts;
}

}  // namespace

SurfaceShape realize_surface(const SurfaceGenes& g) {
  SurfaceShape s;
  s.kind = g.kind;
  s.center = g.center;
  s.bound_radius = g.bound_radius;
  s.theta = g.kind == ShapeKind::Circle ? 0.0 : g.theta;
  switch (g.kind) {
    case ShapeKind::Circle: {
      const double r = 0.5 * (g.f1 * g.bound_radius + g.f2 * g.bound_radius);
      s.a = s.b = r;
      s.boundary = conic_boundary(s.center, r, r, 0.0, kCurvedBoundarySegments);
      break;
    }
    case ShapeKind::Ellipse: {
      s.a = g.f1 * g.bound_radius;
      s.b = g.f2 * g.bound_radius;
      s.boundary = conic_boundary(s.center, s.a, s.b, s.theta, kCurvedBoundarySegments);
      break;
    }
    case ShapeKind::Rectangle: {
      double hx = g.f1 * g.bound_radius;  // half length
      double hy = g.f2 * g.bound_radius;  // half width
      const double half_diag = std::hypot(hx, hy);
      if (half_diag > g.bound_radius) {
        const double vf = g.bound_radius / half_diag;
        hx *= vf;
        hy *= vf;
      }
      s.a = hx;
      s.b = hy;
      // Default subdivision comparable to the curved shapes.
      const double per = 4.0 * (hx + hy);
      s.boundary = rectangle_boundary(s.center, hx, hy, s.theta, per / kCurvedBoundarySegments);
      break;
    }
  }
  return s;
}

std::vector<Vec2> shape_boundary(const SurfaceShape& s, double max_seg_len) {
  if (s.kind == ShapeKind::Rectangle)
    return rectangle_boundary(s.center, s.a, s.b, s.theta, max_seg_len);
  return conic_boundary(s.center, s.a, s.b, s.theta, kCurvedBoundarySegments);
}

int segment_contact(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1, double tol,
                    Vec2* where) {
  const Vec2 da = a1 - a0, db = b1 - b0;
  const double denom = cross2(da, db);
  const double la = da.norm(), lb = db.norm();
  if (la <= tol || lb <= tol) return 0;  // degenerate segment

  if (std::abs(denom) <= 1e-12 * la * lb) {
    // Parallel.  Collinear overlap beyond tol is contact of kind 2; an
    // endpoint touch of collinear segments is a point contact.
    const double dist = std::abs(cross2(da / la, b0 - a0));
    if (dist > tol) return 0;
    const Vec2 ua = da / la;
    double s0 = (b0 - a0).dot(ua), s1 = (b1 - a0).dot(ua);
    if (s0 > s1) std::swap(s0, s1);
    const double lo = std::max(0.0, s0), hi = std::min(la, s1);
    if (hi - lo > tol) return 2;
    if (hi - lo >= -tol) {
      if (where) *where = a0 + 0.5 * (lo + hi) * ua;
      return 1;
    }
    return 0;
  }

  const double s = cross2(b0 - a0, db) / denom;
  const double t = cross2(b0 - a0, da) / denom;
  const double eps_s = tol / la, eps_t = tol / lb;
  if (s < -eps_s || s > 1 + eps_s || t < -eps_t || t > 1 + eps_t) return 0;
  if (where) *where = a0 + s * da;
  return 1;
}

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                        double tol) {
  Vec2 p;
  const int kind = segment_contact(a0, a1, b0, b1, tol, &p);
  if (kind == 0) return false;
  if (kind == 2) return true;
  auto near_point = [&](const Vec2& x, const Vec2& q) { return (x - q).norm() <= tol; };
  const bool at_a_end = near_point(p, a0) || near_point(p, a1);
  const bool at_b_end = near_point(p, b0) || near_point(p, b1);
  return !(at_a_end && at_b_end);  // a touch at the shared vertex alone is not a crossing
}

bool shape_contains_point(const SurfaceShape& s, const Vec2& p) {
  const Vec2 d = p - s.center;
  const double ct = std::cos(s.theta), st = std::sin(s.theta);
  const double x = ct * d.x() + st * d.y();
  const double y = -st * d.x() + ct * d.y();
  constexpr double eps = 1e-12;
  switch (s.kind) {
    case ShapeKind::Circle:
      return d.squaredNorm() <= s.a * s.a * (1 + eps) + eps;
    case ShapeKind::Ellipse: {
      if (s.a <= 0 || s.b <= 0) return false;
      const double q = (x / s.a) * (x / s.a) + (y / s.b) * (y / s.b);
      return q <= 1.0 + eps;
    }
    case ShapeKind::Rectangle:
      return std::abs(x) <= s.a + eps && std::abs(y) <= s.b + eps;
  }
  return false;
}

bool shapes_overlap(const SurfaceShape& s1, const SurfaceShape& s2, double tol) {
  const double gap = (s1.center - s2.center).norm();
  if (gap > s1.bound_radius + s2.bound_radius + tol) return false;
  if (polylines_intersect(s1.boundary, true, s2.boundary, true, tol)) return true;
  return shape_contains_point(s1, s2.boundary.front()) ||
         shape_contains_point(s2, s1.boundary.front());
}

bool polylines_intersect(const std::vector<Vec2>& a, bool a_closed, const std::vector<Vec2>& b,
                         bool b_closed, double tol, const std::vector<Vec2>& exclude) {
  const size_t na = a.size(), nb = b.size();
  if (na < 2 || nb < 2) return false;
  const size_t ea = a_closed ? na : na - 1;
  const size_t eb = b_closed ? nb : nb - 1;
  for (size_t i = 0; i < ea; ++i) {
    const Vec2& a0 = a[i];
    const Vec2& a1 = a[(i + 1) % na];
    for (size_t j = 0; j < eb; ++j) {
      Vec2 p;
      const int kind = segment_contact(a0, a1, b[j], b[(j + 1) % nb], tol, &p);
      if (kind == 0) continue;
      if (kind == 2) return true;
      bool excluded = false;
      for (const auto& q : exclude) {
        if ((p - q).norm() <= tol) {
          excluded = true;
          break;
        }
      }
      if (!excluded) return true;
    }
  }
  return false;
}

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double acc = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) acc += cross2(poly[i], poly[(i + 1) % n]);
  return 0.5 * acc;
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& vi = poly[i];
    const Vec2& vj = poly[j];
    if ((vi.y() > p.y()) != (vj.y() > p.y())) {
      const double x_cross = vj.x() + (p.y() - vj.y()) / (vi.y() - vj.y()) * (vi.x() - vj.x());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

Vec2 closest_point_on_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  double best = std::numeric_limits<double>::max();
  Vec2 best_pt = poly.front();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& q0 = poly[i];
    const Vec2& q1 = poly[(i + 1) % n];
    const Vec2 d = q1 - q0;
    const double len2 = d.squaredNorm();
    double t = len2 > 0 ? (p - q0).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 c = q0 + t * d;
    const double dist = (p - c).squaredNorm();
    if (dist < best) {
      best = dist;
      best_pt = c;
    }
  }
  return best_pt;
}

bool polygon_is_simple(const std::vector<Vec2>& poly, double tol) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a0 = poly[i];
    const Vec2& a1 = poly[(i + 1) % n];
    for (size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share an endpoint by construction).
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(a0, a1, poly[j], poly[(j + 1) % n], tol)) return false;
    }
  }
  return true;
}

}  // namespace ccm
