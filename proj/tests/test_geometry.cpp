#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccm/geometry.hpp"

using namespace ccm;

TEST_CASE("straight member samples uniformly on the chord") {
  HermiteMember m{{0, 0}, {10, 0}, 0.0, 0.0};
  const auto pts = hermite_polyline(m, 10);
  REQUIRE(pts.size() == 11);
  for (int i = 0; i <= 10; ++i) {
    CHECK(pts[i].x() == doctest::Approx(double(i)).epsilon(1e-12));
    CHECK(std::abs(pts[i].y()) < 1e-12);
  }
}

TEST_CASE("polyline endpoints equal the member endpoints bit for bit") {
  HermiteMember m{{1.25, -3.5}, {151.0, 42.0}, 0.31, -0.2};
  const auto pts = hermite_polyline(m, 20);
  CHECK(pts.front().x() == m.p0.x());
  CHECK(pts.front().y() == m.p0.y());
  CHECK(pts.back().x() == m.p1.x());
  CHECK(pts.back().y() == m.p1.y());
}

TEST_CASE("end tangents match chord angle plus slope") {
  HermiteMember m{{0, 0}, {150, 0}, 0.5, -0.5};
  const auto pts = hermite_polyline(m, 20);
  CHECK(pts.size() == 21);
  const Vec2 t0 = m.tangent(0.0), t1 = m.tangent(1.0);
  CHECK(std::abs(std::atan2(t0.y(), t0.x()) - 0.5) < 1e-9);
  CHECK(std::abs(std::atan2(t1.y(), t1.x()) + 0.5) < 1e-9);
}

TEST_CASE("arc-length spacing is uniform within half a percent") {
  HermiteMember m{{0, 0}, {150, 0}, 0.5, 0.5};
  const auto pts = hermite_polyline(m, 20);
  double mn = 1e300, mx = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double d = (pts[i + 1] - pts[i]).norm();
    mn = std::min(mn, d);
    mx = std::max(mx, d);
  }
  CHECK(mx / mn <= 1.005);
}

TEST_CASE("degenerate member is rejected") {
  HermiteMember m{{1, 1}, {1, 1}, 0, 0};
  CHECK_THROWS_AS(hermite_polyline(m, 4), GeometryError);
}

TEST_CASE("circle radius averages the two size factors") {
  SurfaceGenes g{ShapeKind::Circle, {0, 0}, 50.0, 0.4, 0.6, 0.0};
  const auto s = realize_surface(g);
  CHECK(s.a == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(s.b == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("rectangle on the 3-4-5 boundary is not rescaled") {
  SurfaceGenes g{ShapeKind::Rectangle, {0, 0}, 50.0, 0.6, 0.8, 0.0};
  const auto s = realize_surface(g);
  CHECK(s.a == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(s.b == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("oversized rectangle shrinks onto the bounding circle") {
  SurfaceGenes g{ShapeKind::Rectangle, {0, 0}, 50.0, 0.8, 0.8, 0.0};
  const auto s = realize_surface(g);
  const double vf = 50.0 / std::sqrt(40.0 * 40.0 + 40.0 * 40.0);
  CHECK(vf == doctest::Approx(0.883883476).epsilon(1e-8));
  CHECK(s.a == doctest::Approx(40.0 * vf).epsilon(1e-12));
  CHECK(std::hypot(s.a, s.b) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("rectangle rescale is idempotent for feasible rectangles") {
  SurfaceGenes g{ShapeKind::Rectangle, {3, 4}, 50.0, 0.3, 0.2, 0.4};
  const auto s1 = realize_surface(g);
  SurfaceGenes g2 = g;
  g2.f1 = s1.a / g.bound_radius;
  g2.f2 = s1.b / g.bound_radius;
  const auto s2 = realize_surface(g2);
  CHECK(s2.a == doctest::Approx(s1.a).epsilon(1e-12));
  CHECK(s2.b == doctest::Approx(s1.b).epsilon(1e-12));
}

TEST_CASE("surface boundaries stay within the bounding circle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uf(0.1, 1.0), ur(10.0, 50.0), uth(0.0, kPi),
      uc(-100.0, 100.0);
  std::uniform_int_distribution<int> kind(1, 3);
  for (int trial = 0; trial < 10000; ++trial) {
    SurfaceGenes g;
    g.kind = ShapeKind(kind(rng));
    g.center = {uc(rng), uc(rng)};
    g.bound_radius = ur(rng);
    g.f1 = uf(rng);
    g.f2 = uf(rng);
    g.theta = uth(rng);
    const auto s = realize_surface(g);
    for (const auto& p : s.boundary)
      CHECK((p - g.center).norm() <= g.bound_radius + 1e-9);
  }
}

TEST_CASE("segment crossing and endpoint touches") {
  const double tol = 1e-9;
  CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}, tol));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 0}, tol));
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}, tol));  // collinear overlap
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}, tol));
  // T-touch in the interior of one segment counts.
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {1, 1}, tol));
}

namespace {

// Exact integer-arithmetic reference for proper/improper intersection with
// shared-endpoint exclusion.
struct IPt {
  long long x, y;
};
long long icross(IPt o, IPt a, IPt b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}
bool on_segment(IPt p, IPt a, IPt b) {
  return icross(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}
bool ipt_eq(IPt a, IPt b) { return a.x == b.x && a.y == b.y; }

bool exact_intersect(IPt a0, IPt a1, IPt b0, IPt b1) {
  // Count shared endpoints; a single shared endpoint with no further
  // overlap does not count as an intersection.
  const long long d1 = icross(b0, b1, a0), d2 = icross(b0, b1, a1);
  const long long d3 = icross(a0, a1, b0), d4 = icross(a0, a1, b1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;  // proper crossing
  // Collinear/touching cases: collect touch points.
  std::vector<IPt> touches;
  auto add_touch = [&](IPt p) {
    for (const auto& q : touches)
      if (ipt_eq(p, q)) return;
    touches.push_back(p);
  };
  if (d1 == 0 && on_segment(a0, b0, b1)) add_touch(a0);
  if (d2 == 0 && on_segment(a1, b0, b1)) add_touch(a1);
  if (d3 == 0 && on_segment(b0, a0, a1)) add_touch(b0);
  if (d4 == 0 && on_segment(b1, a0, a1)) add_touch(b1);
  if (touches.empty()) return false;
  if (touches.size() > 1) return true;  // overlap of positive length
  // One touch point: intersection unless it is an endpoint of BOTH segments.
  const IPt p = touches.front();
  const bool a_end = ipt_eq(p, a0) || ipt_eq(p, a1);
  const bool b_end = ipt_eq(p, b0) || ipt_eq(p, b1);
  return !(a_end && b_end);
}

}  // namespace

TEST_CASE("segment predicate agrees with the exact rational oracle on a grid") {
  std::vector<IPt> pts;
  for (long long x = 0; x <= 2; ++x)
    for (long long y = 0; y <= 2; ++y) pts.push_back({x, y});
  std::vector<std::pair<IPt, IPt>> segs;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) segs.push_back({pts[i], pts[j]});

  int checked = 0;
  for (const auto& [a0, a1] : segs) {
    for (const auto& [b0, b1] : segs) {
      const bool expect = exact_intersect(a0, a1, b0, b1);
      const bool got = segments_intersect({double(a0.x), double(a0.y)},
                                          {double(a1.x), double(a1.y)},
                                          {double(b0.x), double(b0.y)},
                                          {double(b1.x), double(b1.y)}, 1e-9);
      if (expect != got) {
        CAPTURE(a0.x);
        CAPTURE(a0.y);
        CAPTURE(a1.x);
        CAPTURE(a1.y);
        CAPTURE(b0.x);
        CAPTURE(b0.y);
        CAPTURE(b1.x);
        CAPTURE(b1.y);
      }
      REQUIRE(expect == got);
      ++checked;
    }
  }
  CHECK(checked == int(segs.size() * segs.size()));
}

TEST_CASE("segment predicate is symmetric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 a0{u(rng), u(rng)}, a1{u(rng), u(rng)}, b0{u(rng), u(rng)}, b1{u(rng), u(rng)};
    CHECK(segments_intersect(a0, a1, b0, b1, 1e-9) == segments_intersect(b0, b1, a0, a1, 1e-9));
  }
}

TEST_CASE("containment: circle center and boundary") {
  SurfaceGenes g{ShapeKind::Circle, {0, 0}, 50.0, 0.5, 0.5, 0.0};
  const auto s = realize_surface(g);  // radius 25
  CHECK(shape_contains_point(s, {0, 0}));
  CHECK(shape_contains_point(s, {25, 0}));
  CHECK_FALSE(shape_contains_point(s, {25.1, 0}));
}

TEST_CASE("rotated rectangle containment matches the ray-cast oracle") {
  SurfaceGenes g{ShapeKind::Rectangle, {1, -2}, 50.0, 0.4, 0.2, kPi / 4};
  const auto s = realize_surface(g);
  // Dense boundary for the even-odd reference.
  const auto dense = shape_boundary(s, 0.25);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  int agreements = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const Vec2 p{1 + u(rng) / 2, -2 + u(rng) / 2};
    // Skip points within a hair of the boundary where the discrete oracle
    // is allowed to disagree.
    const Vec2 cp = closest_point_on_polygon(dense, p);
    if ((cp - p).norm() < 1e-6) continue;
    CHECK(shape_contains_point(s, p) == point_in_polygon(dense, p));
    ++agreements;
  }
  CHECK(agreements > 4000);
}

TEST_CASE("ellipse containment is orientation aware") {
  SurfaceGenes g{ShapeKind::Ellipse, {0, 0}, 50.0, 0.8, 0.2, kPi / 2};
  const auto s = realize_surface(g);  // long axis now vertical
  CHECK(shape_contains_point(s, {0, 35}));
  CHECK_FALSE(shape_contains_point(s, {35, 0}));
}

TEST_CASE("overlap detection by crossing and containment") {
  SurfaceGenes a{ShapeKind::Circle, {0, 0}, 50.0, 0.5, 0.5, 0.0};
  SurfaceGenes b{ShapeKind::Circle, {30, 0}, 50.0, 0.5, 0.5, 0.0};
  SurfaceGenes c{ShapeKind::Circle, {200, 0}, 50.0, 0.5, 0.5, 0.0};
  SurfaceGenes inner{ShapeKind::Circle, {0, 0}, 20.0, 0.3, 0.3, 0.0};
  const auto sa = realize_surface(a), sb = realize_surface(b), sc = realize_surface(c),
             si = realize_surface(inner);
  CHECK(shapes_overlap(sa, sb, 1e-9));
  CHECK_FALSE(shapes_overlap(sa, sc, 1e-9));
  CHECK(shapes_overlap(sa, si, 1e-9));  // containment counts
}
