#pragma once

// Small-strain linear plane-stress reference solver (engineering strain,
// dense algebra).  Only the mesh container is shared with the production
// code; the element formulation and solve path are independent.

#include <Eigen/Dense>

#include "ccm/mesher.hpp"

namespace oracle {

struct LinearProblem {
  double E = 20.0;
  double nu = 0.33;
  double t = 6.0;
  std::vector<int> fixed_nodes;              // both dofs clamped
  std::vector<int> fixed_dofs;               // individual dof indices
  std::vector<std::pair<int, double>> loads; // (dof index, value)
  int load_node = -1;                        // convenience point load
  ccm::Vec2 load{0, 0};
};

/// Dense linear solve; throws std::runtime_error on a singular system.
Eigen::VectorXd linear_fe_reference(const ccm::QuadMesh& mesh, const LinearProblem& p);

/// Dense linear stiffness (full, unreduced) for tangent comparisons.
Eigen::MatrixXd linear_stiffness(const ccm::QuadMesh& mesh, double E, double nu, double t);

}  // namespace oracle
