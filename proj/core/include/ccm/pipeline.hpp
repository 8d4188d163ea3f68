#pragma once

// The candidate evaluation pipeline: decode -> filter -> validate -> mesh
// -> loop extraction -> contact assignment -> nonlinear solve -> path
// objective.  Invalid or non-convergent candidates come back penalized,
// never as exceptions.

#include <optional>

#include "ccm/contact.hpp"
#include "ccm/domain.hpp"
#include "ccm/fem.hpp"
#include "ccm/loops.hpp"
#include "ccm/mesher.hpp"
#include "ccm/objective.hpp"

namespace ccm {

struct PipelineConfig {
  MeshOptions mesh;
  Material material;  // E and nu; thickness comes from the design vector
  FemOptions fem;
  int load_steps = 20;
  Vec2 force_direction{1, 0};
  Weights weights;
  int fourier_terms = 100;
  std::vector<Vec2> desired_path;  // waypoints, mm
  double friction_mu = 0.0;
  double contact_penalty_factor = 100.0;
  double contact_gap_tol_factor = 1e-4;
};

struct CandidateArtifacts {
  CandidateTopology topology;  // after filtering (and mesh-stage drops)
  ValidityReport validity;
  QuadMesh mesh;
  std::vector<int> dropped_members;
  std::vector<SurfaceShape> surfaces;  // survivors of the mesh-stage filter
  std::vector<int> removed_surface_ids;
  std::vector<TraversalPath> paths;
  std::vector<Loop> loops;
  ContactAssignment assignment;
  LoadCase loadcase;
  SolveResult solution;
  bool prepared = false;  // mesh/loops ready
  bool analyzed = false;  // solve ran and converged
  double objective = kPenaltyValue;
  std::optional<PenaltyReason> penalty;
};

struct AnalyzeOptions {
  std::optional<double> mu;
  std::optional<double> force;
  const QuadMesh* mesh_override = nullptr;  // same connectivity (wear studies)
  bool record_fields = false;
  bool record_contact_history = false;
};

class CandidateEvaluator {
 public:
  CandidateEvaluator(DesignDomain domain, PipelineConfig cfg);

  /// Geometry stages only: decode through contact assignment.  On failure
  /// the returned artifacts carry the penalty reason.
  CandidateArtifacts prepare(const DesignVector& v) const;

  /// Solve + objective on prepared artifacts (no-op when already penalized).
  void analyze(CandidateArtifacts& art, const AnalyzeOptions& opt = {}) const;

  /// Full pipeline.
  CandidateArtifacts evaluate_full(const DesignVector& v) const;
  EvalOutcome evaluate(const DesignVector& v) const;

  /// Objective of an arbitrary traced path against the configured target.
  double objective_of(const PathTrace& trace) const;

  const FsDescriptor& desired() const { return desired_; }
  const DesignDomain& domain() const { return domain_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  DesignDomain domain_;
  PipelineConfig cfg_;
  FsDescriptor desired_;
};

}  // namespace ccm
