#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "ccm/loops.hpp"
#include "ccm/mesher.hpp"
#include "support.hpp"

using namespace ccm;

TEST_CASE("member band: 20 x 4 gives 80 elements") {
  HermiteMember m{{0, 0}, {150, 0}, 0, 0};
  const auto mesh = flesh_member(hermite_polyline(m, 20), 4.0, 4);
  CHECK(mesh.elements.size() == 80);
  CHECK(mesh.nodes.size() == 21 * 5);
  const auto& mp = mesh.member_patches[0];
  CHECK(mp.rows() == 20);                    // w-set count = n_el
  CHECK(mp.elem_grid[0].size() == 4);        // l-set count = n_ew
}

TEST_CASE("straight band elements are congruent rectangles of lateral size w/n_ew") {
  HermiteMember m{{0, 0}, {100, 0}, 0, 0};
  const auto mesh = flesh_member(hermite_polyline(m, 10), 4.0, 4);
  for (size_t e = 0; e < mesh.elements.size(); ++e) {
    CHECK(element_area(mesh, int(e)) == doctest::Approx(10.0 * 1.0).epsilon(1e-9));
    const auto& c = mesh.elements[e];
    const double lateral = (mesh.nodes[c[3]] - mesh.nodes[c[0]]).norm();
    CHECK(lateral == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("curved band keeps positive Jacobians, outer flank longer than inner") {
  HermiteMember m{{0, 0}, {150, 0}, 0.5, 0.5};
  const auto poly = hermite_polyline(m, 20);
  const auto mesh = flesh_member(poly, 4.0, 4);
  for (size_t e = 0; e < mesh.elements.size(); ++e)
    CHECK(element_min_jacobian(mesh, int(e)) > 0);
  // tau0 = tau1 = +0.5 arcs upward: the j=0 flank (right of travel) is the
  // outer (longer) flank.
  const auto& mp = mesh.member_patches[0];
  double len_lo = 0, len_hi = 0;
  for (int i = 0; i < mp.rows(); ++i) {
    len_lo += (mesh.nodes[mp.node_grid[i + 1][0]] - mesh.nodes[mp.node_grid[i][0]]).norm();
    len_hi += (mesh.nodes[mp.node_grid[i + 1][4]] - mesh.nodes[mp.node_grid[i][4]]).norm();
  }
  CHECK(len_lo > len_hi);
}

TEST_CASE("over-tight curvature is a mesh error naming the member") {
  // Offset half-width far beyond the local curvature radius.
  std::vector<Vec2> poly;
  for (int i = 0; i <= 16; ++i) {
    const double a = kPi * i / 16.0;
    poly.push_back(Vec2(5 * std::cos(a), 5 * std::sin(a)));  // radius-5 arc
  }
  CHECK_THROWS_AS(flesh_member(poly, 12.0, 4), MeshError);
}

TEST_CASE("junction radius formula and scaling") {
  CHECK(junction_radius({4.0, 4.0, 4.0}) ==
        doctest::Approx(0.85 * 4.0 / std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
  CHECK(junction_radius({4.0}) == doctest::Approx(4.4423).epsilon(1e-4));
  CHECK(junction_radius({2.0, 6.0}) == doctest::Approx(6.6634).epsilon(1e-4));
  CHECK(junction_radius({8.0}) == doctest::Approx(2 * junction_radius({4.0})).epsilon(1e-12));
}

namespace {

CandidateTopology three_member_star() {
  testsup::TopoBuilder b;
  b.n_el = 12;
  const int c = b.vertex(0, 0);
  const int e = b.vertex(80, 0);
  const int n = b.vertex(0, 80);
  const int w = b.vertex(-80, 10);
  b.member(c, e, 4.0);
  b.member(c, n, 4.0);
  b.member(c, w, 5.0);
  return b.build();
}

}  // namespace

TEST_CASE("three-member junction: peripheral nodes, element count, distinct arcs") {
  const auto t = three_member_star();
  const auto mb = build_mesh(t, {12, 4});
  CHECK(mb.dropped_members.empty());
  REQUIRE(mb.mesh.junction_patches.size() == 1);
  const auto& jp = mb.mesh.junction_patches[0];
  CHECK(jp.boundary_nodes.size() == 8 * 4);
  CHECK(jp.elems.size() == 4 * 4 * 4);
  REQUIRE(jp.attachments.size() == 3);
  std::set<int> segs;
  for (const auto& a : jp.attachments) segs.insert(a.arc_segment);
  CHECK(segs.size() == 3);
  CHECK(jp.radius == doctest::Approx(junction_radius({4.0, 4.0, 5.0})));
}

TEST_CASE("junction counts hold for every n_ew in 2..8") {
  for (int n_ew = 2; n_ew <= 8; ++n_ew) {
    const auto t = three_member_star();
    const auto mb = build_mesh(t, {12, n_ew});
    REQUIRE(mb.mesh.junction_patches.size() == 1);
    const auto& jp = mb.mesh.junction_patches[0];
    CHECK(int(jp.boundary_nodes.size()) == 8 * n_ew);
    CHECK(int(jp.elems.size()) == 4 * n_ew * n_ew);
  }
}

TEST_CASE("stage 1: no member element centroid remains inside a junction circle") {
  const auto t = three_member_star();
  const auto mb = build_mesh(t, {12, 4});
  const auto& mesh = mb.mesh;
  for (const auto& jp : mesh.junction_patches) {
    for (size_t e = 0; e < mesh.elements.size(); ++e) {
      if (mesh.owners[e].kind != QuadMesh::Owner::Kind::Member) continue;
      CHECK((element_centroid(mesh, int(e)) - jp.center).norm() >= jp.radius - 1e-9);
    }
  }
}

TEST_CASE("merged mesh is watertight: every boundary node has one in and one out side") {
  const auto t = three_member_star();
  const auto mb = build_mesh(t, {12, 4});
  const auto bs = boundary_sides(mb.mesh);
  std::map<int, int> out_count, in_count;
  for (const auto& s : bs) {
    const auto [a, bnode] = side_nodes(mb.mesh, s);
    out_count[a]++;
    in_count[bnode]++;
  }
  for (const auto& [node, c] : out_count) {
    CHECK(c == 1);
    CHECK(in_count[node] == 1);
  }
  check_positive_jacobians(mb.mesh);
}

TEST_CASE("node-count conservation through attachment") {
  const auto t = three_member_star();
  const MeshOptions opt{12, 4};
  const auto mb = build_mesh(t, opt);
  // Kept rows per member patch determine its node contribution; each
  // attachment shares n_ew+1 peripheral nodes instead of its own cut row.
  int expected = int(mb.mesh.junction_patches[0].all_nodes.size());
  for (const auto& mp : mb.mesh.member_patches) {
    int stations = mp.rows() + 1;
    int shared = 0;
    for (const auto& att : mb.mesh.junction_patches[0].attachments)
      if (att.member_patch == &mp - mb.mesh.member_patches.data()) ++shared;
    expected += (stations - shared) * (opt.n_ew + 1);
  }
  CHECK(int(mb.mesh.nodes.size()) == expected);
}

TEST_CASE("degree-2 junction reshapes the free periphery toward the member corners") {
  testsup::TopoBuilder b;
  b.n_el = 12;
  const int c = b.vertex(0, 0);
  const int e = b.vertex(90, 0);
  const int w = b.vertex(-90, 0);
  b.member(c, e, 4.0);
  b.member(c, w, 4.0);
  const auto mb = build_mesh(b.build(), {12, 4});
  REQUIRE(mb.mesh.junction_patches.size() == 1);
  const auto& jp = mb.mesh.junction_patches[0];
  // Stage 4 pulls unattached peripheral nodes inside the attachment
  // polygon: they must end up well inside the original circle.
  std::set<int> attached;
  for (const auto& att : jp.attachments)
    for (int k = 0; k <= 4; ++k)
      attached.insert(jp.boundary_nodes[(att.arc_segment * 4 + k) % 32]);
  int moved = 0;
  for (int id : jp.boundary_nodes) {
    if (attached.count(id)) continue;
    if ((mb.mesh.nodes[id] - jp.center).norm() < jp.radius * 0.95) ++moved;
  }
  CHECK(moved > 0);
  check_positive_jacobians(mb.mesh);
}

TEST_CASE("a member consumed by junction trimming is dropped with a warning") {
  testsup::TopoBuilder b;
  b.n_el = 6;
  const int c0 = b.vertex(0, 0);
  const int c1 = b.vertex(7, 0);  // much shorter than the junction radii
  const int e0 = b.vertex(-80, 0);
  const int e1 = b.vertex(80, 5);
  const int e2 = b.vertex(7, 80);
  b.member(c0, c1, 5.0);  // short bridge between two junctions
  b.member(c0, e0, 5.0);
  b.member(c1, e1, 5.0);
  b.member(c1, e2, 5.0);
  const auto mb = build_mesh(b.build(), {6, 2});
  CHECK(mb.dropped_members.size() == 1);
  CHECK(mb.dropped_members[0] == 0);
  CHECK_FALSE(mb.warnings.empty());
  check_positive_jacobians(mb.mesh);
}

TEST_CASE("member top-flank sides chain into a connected polyline") {
  HermiteMember m{{0, 0}, {120, 0}, 0.3, -0.2};
  const auto mesh = flesh_member(hermite_polyline(m, 12), 4.0, 3);
  const auto& mp = mesh.member_patches[0];
  for (int i = 0; i < mp.rows(); ++i) {
    const auto& e = mesh.elements[mp.elem_grid[i][2]];
    // side 3 of the top l-set: nodes 2->3 run along the upper boundary
    CHECK(e[3] == mp.node_grid[i][3]);
    CHECK(e[2] == mp.node_grid[i + 1][3]);
    if (i > 0) {
      const auto& prev = mesh.elements[mp.elem_grid[i - 1][2]];
      CHECK(prev[2] == e[3]);  // consecutive sides share a node
    }
  }
}

TEST_CASE("surface intersecting fleshed quads but not the skeleton is removed") {
  testsup::TopoBuilder b;
  b.n_el = 10;
  const int v0 = b.vertex(0, 0);
  const int v1 = b.vertex(100, 0);
  b.member(v0, v1, 6.0);
  const auto t = b.build();
  const auto mb = build_mesh(t, {10, 2});

  // Circle hovering 2.5 mm above the axis: clears the skeleton, cuts the
  // 3 mm half-width band.
  SurfaceGenes g{ShapeKind::Circle, {50, 5.0}, 10.0, 0.25, 0.25, 0.0};
  auto near_band = realize_surface(g);  // radius 2.5, lowest point y = 2.5
  near_band.id = 0;
  SurfaceGenes far{ShapeKind::Circle, {50, 40}, 10.0, 0.5, 0.5, 0.0};
  auto far_off = realize_surface(far);
  far_off.id = 1;

  std::vector<int> removed;
  const auto kept =
      filter_surfaces_against_mesh(mb.mesh, {near_band, far_off}, 1e-6, &removed);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].id == 1);
  REQUIRE(removed.size() == 1);
  CHECK(removed[0] == 0);
}

TEST_CASE("surface inside an inner void survives the mesh filter") {
  // Square frame of four members; a small circle in the middle touches
  // nothing and stays eligible for inner-loop contact.
  testsup::TopoBuilder b;
  b.n_el = 10;
  const int a = b.vertex(0, 0);
  const int c = b.vertex(100, 0);
  const int d = b.vertex(100, 100);
  const int e = b.vertex(0, 100);
  b.member(a, c, 4.0);
  b.member(c, d, 4.0);
  b.member(d, e, 4.0);
  b.member(e, a, 4.0);
  const auto mb = build_mesh(b.build(), {10, 2});
  SurfaceGenes g{ShapeKind::Circle, {50, 50}, 15.0, 0.8, 0.8, 0.0};
  auto s = realize_surface(g);
  s.id = 0;
  const auto kept = filter_surfaces_against_mesh(mb.mesh, {s}, 1e-6, nullptr);
  CHECK(kept.size() == 1);
}

TEST_CASE("wear: zero fraction is the identity") {
  const auto mesh = testsup::block_mesh(100, 4, 10, 2);
  const auto worn = apply_wear(mesh, {{0, 1}}, 0.0);
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    CHECK((worn.nodes[i] - mesh.nodes[i]).norm() == 0.0);
}

TEST_CASE("wear: ten percent trims each affected element area by ten percent") {
  HermiteMember m{{0, 0}, {100, 0}, 0, 0};
  const auto mesh = flesh_member(hermite_polyline(m, 10), 4.0, 4);
  const auto& mp = mesh.member_patches[0];
  // Whole lower band (side 1 of the j=0 l-set) is the contact region.
  std::vector<ElementSide> region;
  for (int i = 0; i < mp.rows(); ++i) region.push_back({mp.elem_grid[i][0], 1});
  const auto worn = apply_wear(mesh, region, 0.10);
  for (int i = 0; i < mp.rows(); ++i) {
    const double before = element_area(mesh, mp.elem_grid[i][0]);
    const double after = element_area(worn, mp.elem_grid[i][0]);
    CHECK(after == doctest::Approx(0.90 * before).epsilon(1e-9));
    // Neighbouring interior elements keep their area.
    const double b1 = element_area(mesh, mp.elem_grid[i][1]);
    const double a1 = element_area(worn, mp.elem_grid[i][1]);
    CHECK(a1 == doctest::Approx(b1).epsilon(1e-9));
  }
}

TEST_CASE("wear study fractions all apply cleanly") {
  HermiteMember m{{0, 0}, {100, 0}, 0.2, -0.2};
  const auto mesh = flesh_member(hermite_polyline(m, 10), 4.0, 4);
  const auto& mp = mesh.member_patches[0];
  std::vector<ElementSide> region;
  for (int i = 0; i < mp.rows(); ++i) region.push_back({mp.elem_grid[i][0], 1});
  for (double w : {0.005, 0.01, 0.05, 0.10}) {
    const auto worn = apply_wear(mesh, region, w);
    check_positive_jacobians(worn);
  }
  CHECK_THROWS_AS(apply_wear(mesh, region, 1.0), WearError);
}
