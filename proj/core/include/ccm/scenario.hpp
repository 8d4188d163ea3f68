#pragma once

// Scenario studies over a fixed design: wrong-key variants (surfaces
// removed or rotated, pad/obstacle checks), friction sweeps (minimum
// pad-reaching force by bisection), wear sweeps, and mesh-density sweeps.

#include <string>
#include <vector>

#include "ccm/config.hpp"
#include "ccm/pipeline.hpp"

namespace ccm {

struct ScenarioReport {
  std::string name;
  ScenarioKind kind = ScenarioKind::WrongKey;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string summary;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Geometry of the pad/obstacle checks, in mm.
struct SwitchGeometry {
  bool has_pad = false;
  Vec2 pad_center{0, 0};
  double pad_radius = 0;
  std::vector<std::array<double, 3>> obstacles;  // x, y, r
};

SwitchGeometry switch_geometry(const JobConfig& cfg);

/// True when the traced path's endpoint lies in the pad circle.
bool reaches_pad(const PathTrace& trace, const SwitchGeometry& sw);

/// True when any loop boundary node enters any obstacle circle at any
/// recorded step (requires recorded fields).
bool hits_obstacle(const CandidateArtifacts& art, const SwitchGeometry& sw);

/// Minimum force whose path endpoint reaches the pad, by bisection over
/// [lo, hi]; returns a negative value when even `hi` does not reach.
double minimal_pad_force(const CandidateEvaluator& ev, const DesignVector& v,
                         const SwitchGeometry& sw, double mu, double lo, double hi, double tol);

ScenarioReport run_scenario(const CandidateEvaluator& ev, const DesignVector& v,
                            const JobConfig& cfg, const std::string& name);

}  // namespace ccm
