#include "linear_fe.hpp"

#include <stdexcept>

namespace oracle {

namespace {

void quad_stiffness(const ccm::QuadMesh& mesh, int ei, double E, double nu, double t,
                    Eigen::Matrix<double, 8, 8>& ke) {
  Eigen::Matrix3d C;
  const double f = E / (1.0 - nu * nu);
  C << f, f * nu, 0, f * nu, f, 0, 0, 0, f * (1 - nu) / 2;

  const auto& conn = mesh.elements[ei];
  ke.setZero();
  const double g = 1.0 / std::sqrt(3.0);
  const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  for (const auto& gp : pts) {
    const double xi = gp[0], eta = gp[1];
    const double dxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
    const double deta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 4; ++a) {
      J(0, 0) += dxi[a] * mesh.nodes[conn[a]].x();
      J(0, 1) += dxi[a] * mesh.nodes[conn[a]].y();
      J(1, 0) += deta[a] * mesh.nodes[conn[a]].x();
      J(1, 1) += deta[a] * mesh.nodes[conn[a]].y();
    }
    const double detJ = J.determinant();
    const Eigen::Matrix2d Ji = J.inverse();
    Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
    for (int a = 0; a < 4; ++a) {
      const double dx = Ji(0, 0) * dxi[a] + Ji(0, 1) * deta[a];
      const double dy = Ji(1, 0) * dxi[a] + Ji(1, 1) * deta[a];
      B(0, 2 * a) = dx;
      B(1, 2 * a + 1) = dy;
      B(2, 2 * a) = dy;
      B(2, 2 * a + 1) = dx;
    }
    ke += B.transpose() * C * B * detJ * t;
  }
}

}  // namespace

Eigen::MatrixXd linear_stiffness(const ccm::QuadMesh& mesh, double E, double nu, double t) {
  const int n = 2 * int(mesh.nodes.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::Matrix<double, 8, 8> ke;
  for (int ei = 0; ei < int(mesh.elements.size()); ++ei) {
    quad_stiffness(mesh, ei, E, nu, t, ke);
    const auto& conn = mesh.elements[ei];
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        K(2 * conn[a / 2] + a % 2, 2 * conn[b / 2] + b % 2) += ke(a, b);
  }
  return K;
}

Eigen::VectorXd linear_fe_reference(const ccm::QuadMesh& mesh, const LinearProblem& p) {
  const int n = 2 * int(mesh.nodes.size());
  Eigen::MatrixXd K = linear_stiffness(mesh, p.E, p.nu, p.t);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
  if (p.load_node >= 0) {
    F[2 * p.load_node] = p.load.x();
    F[2 * p.load_node + 1] = p.load.y();
  }
  for (const auto& [dof, val] : p.loads) F[dof] += val;
  std::vector<bool> fixed(n, false);
  for (int nd : p.fixed_nodes) {
    fixed[2 * nd] = true;
    fixed[2 * nd + 1] = true;
  }
  for (int dof : p.fixed_dofs) fixed[dof] = true;
  std::vector<int> free;
  for (int i = 0; i < n; ++i)
    if (!fixed[i]) free.push_back(i);
  Eigen::MatrixXd Kr(free.size(), free.size());
  Eigen::VectorXd Fr(free.size());
  for (size_t i = 0; i < free.size(); ++i) {
    Fr[i] = F[free[i]];
    for (size_t j = 0; j < free.size(); ++j) Kr(i, j) = K(free[i], free[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Kr);
  if (!lu.isInvertible()) throw std::runtime_error("linear_fe_reference: singular system");
  const Eigen::VectorXd ur = lu.solve(Fr);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (size_t i = 0; i < free.size(); ++i) u[free[i]] = ur[i];
  return u;
}

}  // namespace oracle
