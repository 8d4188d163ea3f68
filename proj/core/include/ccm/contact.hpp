#pragma once

// Frictionless node-to-segment contact with augmented Lagrangian
// multipliers and an active-set update, plus regularized Coulomb friction
// for the friction studies.  Targets are piecewise-linear chains: closed
// boundary-node cycles of the deformable body, or fixed rigid polylines.

#include <Eigen/Sparse>
#include <vector>

#include "ccm/loops.hpp"
#include "ccm/mesher.hpp"

namespace ccm {

struct ContactChain {
  bool rigid = false;
  bool closed = true;
  std::vector<int> nodes;            // deformable: closed node cycle
  std::vector<ElementSide> sides;    // deformable: matching boundary sides
  std::vector<Vec2> points;          // rigid: closed polyline
  int loop_index = -1;               // deformable owner
  int surface_id = -1;               // rigid owner
  int segment_count() const {
    const int n = rigid ? int(points.size()) : int(nodes.size());
    return closed ? n : n - 1;
  }
};

struct ContactPair {
  int follower_loop = -1;
  int follower_chain = -1;  // the follower loop's own chain
  int chain = -1;           // target chain
  bool self = false;
};

struct Projection {
  int segment = -1;
  double xi = 0;  // local coordinate in [-1, 1]
  Vec2 point{0, 0};
  Vec2 normal{0, 0};
  Vec2 tangent{0, 0};
  double seg_len = 0;
  double arc = 0;  // arc-length coordinate along the chain
  double distance = 0;
};

/// One follower node against one target chain.
struct ContactPairState {
  int pair = -1;
  int node = -1;
  int cycle_index = -1;  // follower's index in its loop's node cycle
  double lambda = 0;     // accumulated multiplier, kept >= 0
  bool active = false;
  double arc_prev = 0;
  bool has_prev = false;
};

struct ContactSetup {
  std::vector<ContactChain> chains;
  std::vector<ContactPair> pairs;
  std::vector<ContactPairState> states;
  double penalty = 0;  // force per unit penetration
  double gap_tol = 0;
  double mu = 0;
  double k_t = 0;      // stick regularization stiffness
  double capture = 0;  // self-contact screening band; <= 0 disables it

  bool empty() const { return states.empty(); }
};

/// Current position of chain segment endpoints under displacement u
/// (rigid chains ignore u).
std::vector<Vec2> chain_points(const ContactChain& chain, const QuadMesh& mesh,
                               const Eigen::VectorXd& u);

/// Global minimizer of the distance to the chain; within a segment the
/// local coordinate solves (x - xp) . a = 0 clamped to [-1, 1].
/// `exclude_cycle_index` skips the two segments adjacent to a follower that
/// lies on the chain itself (self contact).  With `interior_only`, segments
/// whose unclamped coordinate falls outside [-1, 1] are skipped entirely
/// (endpoint projections carry no usable normal).
Projection closest_point(const Vec2& x, const std::vector<Vec2>& pts, bool closed,
                         int exclude_cycle_index = -1, bool interior_only = false);

/// Signed distance along the projection normal; negative means penetration.
double normal_gap(const Vec2& x, const Projection& p);

/// Regularized Coulomb traction: -min(k_t*|slip|, mu*pressure)*sign(slip).
double friction_traction(double slip, double pressure, double mu, double k_t);

/// Assemble per-pair penalties, gap tolerance and follower states from the
/// loop/surface assignment.  penalty = penalty_factor * E * t / mean edge,
/// gap_tol = gap_tol_factor * mean edge.
ContactSetup make_contact_setup(const QuadMesh& mesh, const std::vector<Loop>& loops,
                                const ContactAssignment& assign,
                                const std::vector<SurfaceShape>& surfaces, double youngs_modulus,
                                double thickness, double mu, double penalty_factor = 100.0,
                                double gap_tol_factor = 1e-4);

struct ContactEval {
  double max_penetration = 0;
  int n_active = 0;
};

/// Evaluate contact forces (on the nodes) and the consistent stiffness at
/// the current displacements, using the stored multipliers as the augmented
/// base value.  Forces accumulate into f_contact; stiffness triplets (the
/// derivative of minus the nodal forces) append to K when given.
ContactEval evaluate_contact(const ContactSetup& setup, const QuadMesh& mesh,
                             const Eigen::VectorXd& u, Eigen::VectorXd& f_contact,
                             std::vector<Eigen::Triplet<double>>* K);

struct AugmentResult {
  double max_penetration = 0;
  double max_adhesion_gap = 0;  // largest open gap still carrying a multiplier
  int n_active = 0;
  bool changed = false;  // any activation/deactivation
};

/// Uzawa update after a converged inner solve: lambda <- max(lambda - eps*g, 0);
/// pairs whose updated multiplier vanishes leave the active set.
AugmentResult augment_and_update_active_set(ContactSetup& setup, const QuadMesh& mesh,
                                            const Eigen::VectorXd& u);

/// Store the slip reference (projection arc coordinates) of active pairs at
/// the end of a converged load step.
void commit_slip_reference(ContactSetup& setup, const QuadMesh& mesh, const Eigen::VectorXd& u);

/// Boundary sides adjacent to the currently active follower nodes (the wear
/// regions; rigid target surfaces are never worn).
std::vector<ElementSide> active_contact_sides(const ContactSetup& setup);

}  // namespace ccm
