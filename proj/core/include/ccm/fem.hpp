#pragma once

// Geometrically nonlinear plane-stress solver over 4-node quadrilaterals:
// total-Lagrangian Saint Venant-Kirchhoff kinematics, 2x2 Gauss quadrature,
// incremental loading with Newton-Raphson and adaptive step halving, and an
// outer augmentation loop driving contact penetration below tolerance.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "ccm/contact.hpp"
#include "ccm/mesher.hpp"

namespace ccm {

struct Material {
  double E = 20.0;   // N/mm^2
  double nu = 0.33;
  double t = 6.0;    // mm
};

struct LoadCase {
  int input_node = -1;
  Vec2 direction{1, 0};  // unit vector
  double magnitude = 0;  // N
  int output_node = -1;
  std::vector<int> fixed_nodes;
  int n_steps = 20;
};

struct PathTrace {
  std::vector<Vec2> points;  // output-port position, undeformed first
};

struct FemOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  int max_newton_iters = 25;
  int max_halvings = 6;  // increment floor = base/64
  int max_augmentations = 20;
  bool record_fields = false;
  bool record_contact_history = false;
};

struct ContactEvent {
  int pair = -1;
  int node = -1;
  double lambda = 0;
};

struct SolveResult {
  bool converged = false;
  std::string message;
  PathTrace trace;
  Eigen::VectorXd u;
  std::vector<Eigen::VectorXd> step_fields;                // when record_fields
  std::vector<std::vector<ContactEvent>> contact_history;  // when record_contact_history
  std::vector<ElementSide> contact_region;                 // sides ever active
  ContactSetup contact;                                    // final multipliers
  double external_work = 0;
  double strain_energy = 0;
  int converged_steps = 0;
};

/// Internal forces and (optionally) tangent stiffness triplets at u.
/// Returns false when a trial state is unusable (non-finite entries or a
/// negative deformation-gradient determinant), signalling step rejection.
bool assemble(const QuadMesh& mesh, const Material& mat, const Eigen::VectorXd& u,
              Eigen::VectorXd& f_int, std::vector<Eigen::Triplet<double>>* K);

double strain_energy(const QuadMesh& mesh, const Material& mat, const Eigen::VectorXd& u);

SolveResult solve(const QuadMesh& mesh, const Material& mat, const LoadCase& load,
                  ContactSetup contact, const FemOptions& opt = {});

}  // namespace ccm
