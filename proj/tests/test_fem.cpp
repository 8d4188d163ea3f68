#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccm/fem.hpp"
#include "oracles/elastica.hpp"
#include "oracles/linear_fe.hpp"
#include "support.hpp"

using namespace ccm;

namespace {

Eigen::MatrixXd dense_tangent(const QuadMesh& mesh, const Material& mat,
                              const Eigen::VectorXd& u) {
  Eigen::VectorXd f;
  std::vector<Eigen::Triplet<double>> trips;
  REQUIRE(assemble(mesh, mat, u, f, &trips));
  const int n = 2 * int(mesh.nodes.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : trips) K(t.row(), t.col()) += t.value();
  return K;
}

std::vector<int> left_edge_nodes(int nx, int ny) {
  std::vector<int> out;
  for (int j = 0; j <= ny; ++j) out.push_back(j * (nx + 1));
  return out;
}

}  // namespace

TEST_CASE("zero displacement gives exactly zero internal forces") {
  const auto mesh = testsup::block_mesh(100, 20, 5, 2);
  const Material mat{20.0, 0.33, 6.0};
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * mesh.nodes.size()), f;
  REQUIRE(assemble(mesh, mat, u, f, nullptr));
  CHECK(f.norm() == 0.0);
}

TEST_CASE("tangent is symmetric to 1e-10 relative") {
  const auto mesh = testsup::block_mesh(60, 20, 4, 2);
  const Material mat{20.0, 0.33, 6.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> un(-0.5, 0.5);
  Eigen::VectorXd u(2 * mesh.nodes.size());
  for (int i = 0; i < u.size(); ++i) u[i] = un(rng);
  const Eigen::MatrixXd K = dense_tangent(mesh, mat, u);
  const double denom = K.norm();
  CHECK((K - K.transpose()).norm() <= 1e-10 * denom);
}

TEST_CASE("small-strain tangent matches the linear-elastic reference") {
  const auto mesh = testsup::block_mesh(80, 20, 4, 2);
  const Material mat{20.0, 0.33, 6.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  Eigen::VectorXd u(2 * mesh.nodes.size());
  for (int i = 0; i < u.size(); ++i) u[i] = 1e-6 * un(rng);
  const Eigen::MatrixXd K = dense_tangent(mesh, mat, u);
  const Eigen::MatrixXd K0 = oracle::linear_stiffness(mesh, mat.E, mat.nu, mat.t);
  CHECK((K - K0).norm() <= 1e-4 * K0.norm());
}

TEST_CASE("tangent matches central differences of the internal forces") {
  const auto mesh = testsup::block_mesh(30, 15, 2, 1);
  const Material mat{20.0, 0.33, 6.0};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> un(-0.8, 0.8);
  Eigen::VectorXd u(2 * mesh.nodes.size());
  for (int i = 0; i < u.size(); ++i) u[i] = un(rng);

  const Eigen::MatrixXd K = dense_tangent(mesh, mat, u);
  const int n = int(u.size());
  Eigen::MatrixXd K_fd(n, n);
  const double h = 1e-6;
  Eigen::VectorXd fp, fm;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd up = u, um = u;
    up[j] += h;
    um[j] -= h;
    REQUIRE(assemble(mesh, mat, up, fp, nullptr));
    REQUIRE(assemble(mesh, mat, um, fm, nullptr));
    K_fd.col(j) = (fp - fm) / (2 * h);
  }
  CHECK((K - K_fd).norm() <= 1e-5 * K.norm());
}

TEST_CASE("zero force keeps the output port fixed over all steps") {
  const auto mesh = testsup::block_mesh(100, 10, 5, 1);
  const Material mat{20.0, 0.33, 6.0};
  LoadCase load;
  load.input_node = 5;
  load.output_node = 11;
  load.direction = {0, 1};
  load.magnitude = 0.0;
  load.fixed_nodes = left_edge_nodes(5, 1);
  load.n_steps = 5;
  const auto res = solve(mesh, mat, load, {}, {});
  REQUIRE(res.converged);
  REQUIRE(res.trace.points.size() == 6);
  for (const auto& p : res.trace.points) CHECK((p - res.trace.points[0]).norm() == 0.0);
}

TEST_CASE("linear-regime cantilever matches beam theory within five percent") {
  // Fully integrated Q4 needs a fine axial division to shed parasitic
  // shear on slender beams.
  const int nx = 200, ny = 4;
  const auto mesh = testsup::block_mesh(100, 2, nx, ny);
  const Material mat{20.0, 0.33, 6.0};
  // Oracle self-check plus small-load production solve.
  oracle::LinearProblem p;
  p.E = mat.E;
  p.nu = mat.nu;
  p.t = mat.t;
  p.fixed_nodes = left_edge_nodes(nx, ny);
  p.load_node = (ny / 2) * (nx + 1) + nx;  // mid-height tip node
  p.load = {0, 1e-4};
  const auto u_ref = oracle::linear_fe_reference(mesh, p);
  const double EI = mat.E * mat.t * 8.0 / 12.0;  // t*h^3/12, h=2
  const double beam_tip = 1e-4 * 1e6 / (3 * EI);
  CHECK(u_ref[2 * p.load_node + 1] == doctest::Approx(beam_tip).epsilon(0.05));

  LoadCase load;
  load.input_node = p.load_node;
  load.output_node = p.load_node;
  load.direction = {0, 1};
  load.magnitude = 1e-4;
  load.fixed_nodes = p.fixed_nodes;
  load.n_steps = 2;
  const auto res = solve(mesh, mat, load, {}, {});
  REQUIRE(res.converged);
  const double tip = res.u[2 * p.load_node + 1];
  CHECK(tip == doctest::Approx(u_ref[2 * p.load_node + 1]).epsilon(1e-3));
}

TEST_CASE("oracle converges at second order in the mesh size") {
  const Material mat{20.0, 0.33, 6.0};
  auto tip_for = [&](int nx, int ny) {
    const auto mesh = testsup::block_mesh(100, 10, nx, ny);
    oracle::LinearProblem p;
    p.E = mat.E;
    p.nu = mat.nu;
    p.t = mat.t;
    p.fixed_nodes = left_edge_nodes(nx, ny);
    p.load_node = (ny / 2) * (nx + 1) + nx;
    p.load = {0, 0.01};
    return oracle::linear_fe_reference(mesh, p)[2 * p.load_node + 1];
  };
  const double u1 = tip_for(10, 2), u2 = tip_for(20, 4), u3 = tip_for(40, 8);
  // Richardson: (u2-u1)/(u3-u2) ~ 4 for O(h^2).
  const double ratio = (u2 - u1) / (u3 - u2);
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("large-deflection cantilever tip follows the elastica") {
  const int nx = 400, ny = 4;
  const double L = 100.0, h = 2.0;
  const auto mesh = testsup::block_mesh(L, h, nx, ny);
  const Material mat{20.0, 0.33, 6.0};
  const double EI = mat.E * mat.t * h * h * h / 12.0;
  const int tip = (ny / 2) * (nx + 1) + nx;

  for (const double alpha2 : {1.0, 2.0, 3.0}) {
    const double P = alpha2 * EI / (L * L);
    LoadCase load;
    load.input_node = tip;
    load.output_node = tip;
    load.direction = {0, 1};
    load.magnitude = P;
    load.fixed_nodes = left_edge_nodes(nx, ny);
    load.n_steps = 10;
    const auto res = solve(mesh, mat, load, {}, {});
    REQUIRE(res.converged);
    const Vec2 fem_tip = res.trace.points.back();
    const auto ref = oracle::elastica_tip(P, L, EI);
    // Reference tracks the neutral axis from (0,0); the mesh tip node sits
    // at mid-height already.
    CHECK(std::abs(fem_tip.x() - ref.x) <= 0.02 * L);
    CHECK(std::abs(fem_tip.y() - (ref.y + h / 2)) <= 0.02 * L);
  }
}

TEST_CASE("external work balances strain energy within one percent") {
  const int nx = 60, ny = 4;
  const auto mesh = testsup::block_mesh(100, 2, nx, ny);
  const Material mat{20.0, 0.33, 6.0};
  const double EI = mat.E * mat.t * 8.0 / 12.0;
  const double P = 2.0 * EI / 1e4;
  const int tip = (ny / 2) * (nx + 1) + nx;
  LoadCase load;
  load.input_node = tip;
  load.output_node = tip;
  load.direction = {0, 1};
  load.magnitude = P;
  load.fixed_nodes = left_edge_nodes(nx, ny);
  load.n_steps = 40;
  const auto res = solve(mesh, mat, load, {}, {});
  REQUIRE(res.converged);
  CHECK(res.external_work == doctest::Approx(res.strain_energy).epsilon(0.01));
}

TEST_CASE("rigid rotation of mesh and load rotates the path") {
  const int nx = 20, ny = 2;
  const auto mesh = testsup::block_mesh(50, 4, nx, ny);
  const Material mat{20.0, 0.33, 6.0};
  const int tip = (ny / 2) * (nx + 1) + nx;
  FemOptions tight;
  tight.rel_tol = 1e-12;

  LoadCase load;
  load.input_node = tip;
  load.output_node = tip;
  load.direction = {0, 1};
  load.magnitude = 0.05;
  load.fixed_nodes = left_edge_nodes(nx, ny);
  load.n_steps = 4;
  const auto base = solve(mesh, mat, load, {}, tight);
  REQUIRE(base.converged);

  const double phi = 0.7;
  const double c = std::cos(phi), s = std::sin(phi);
  QuadMesh rot = mesh;
  for (auto& p : rot.nodes) p = Vec2(c * p.x() - s * p.y(), s * p.x() + c * p.y());
  LoadCase rload = load;
  rload.direction = Vec2(-s, c);
  const auto rres = solve(rot, mat, rload, {}, tight);
  REQUIRE(rres.converged);

  double scale = 0;
  for (const auto& p : base.trace.points) scale = std::max(scale, p.norm());
  for (size_t i = 0; i < base.trace.points.size(); ++i) {
    const Vec2 b = base.trace.points[i];
    const Vec2 expect(c * b.x() - s * b.y(), s * b.x() + c * b.y());
    CHECK((rres.trace.points[i] - expect).norm() <= 1e-8 * scale);
  }
}

TEST_CASE("repeated runs are bit-identical") {
  const int nx = 30, ny = 3;
  const auto mesh = testsup::block_mesh(80, 6, nx, ny);
  const Material mat{20.0, 0.33, 6.0};
  const int tip = (ny / 2) * (nx + 1) + nx;
  LoadCase load;
  load.input_node = tip;
  load.output_node = tip;
  load.direction = {0, 1};
  load.magnitude = 0.4;
  load.fixed_nodes = left_edge_nodes(nx, ny);
  load.n_steps = 6;
  const auto r1 = solve(mesh, mat, load, {}, {});
  const auto r2 = solve(mesh, mat, load, {}, {});
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  REQUIRE(r1.trace.points.size() == r2.trace.points.size());
  for (size_t i = 0; i < r1.trace.points.size(); ++i) {
    CHECK(r1.trace.points[i].x() == r2.trace.points[i].x());
    CHECK(r1.trace.points[i].y() == r2.trace.points[i].y());
  }
}

TEST_CASE("patch element under uniform tension reproduces the exact strain") {
  // Single 10x10 element, rollers on the left and bottom edges, total
  // axial force F on the right edge: eps_x = F/(h*t*E), eps_y = -nu*eps_x.
  auto mesh = testsup::block_mesh(10, 10, 1, 1);
  oracle::LinearProblem p;
  p.E = 20.0;
  p.nu = 0.3;
  p.t = 6.0;
  p.fixed_dofs = {2 * 0, 2 * 0 + 1, 2 * 2, 2 * 1 + 1};  // ux left, uy bottom
  const double F = 0.012;
  p.loads = {{2 * 1, F / 2}, {2 * 3, F / 2}};
  const auto u = oracle::linear_fe_reference(mesh, p);
  const double eps_x = F / (10.0 * p.t * p.E);
  CHECK(u[2 * 1] == doctest::Approx(10.0 * eps_x).epsilon(1e-9));
  CHECK(u[2 * 3] == doctest::Approx(10.0 * eps_x).epsilon(1e-9));
  CHECK(u[2 * 3 + 1] == doctest::Approx(-p.nu * eps_x * 10.0).epsilon(1e-9));

  // The nonlinear assembly linearizes to the same response at small strain.
  Eigen::VectorXd un = Eigen::VectorXd::Zero(8), f;
  un = u;
  const Material mat{p.E, p.nu, p.t};
  REQUIRE(assemble(mesh, mat, un, f, nullptr));
  CHECK(f[2 * 1] == doctest::Approx(F / 2).epsilon(1e-4));
}
