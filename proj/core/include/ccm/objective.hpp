#pragma once

// Path comparison via Fourier descriptors of the cumulative turning-angle
// function of a closed polygon, plus the penalty for candidates that never
// reach analysis.

#include <optional>
#include <vector>

#include "ccm/types.hpp"

namespace ccm {

struct FsDescriptor {
  std::vector<double> alpha;  // cosine coefficients, 1..N
  std::vector<double> beta;   // sine coefficients, 1..N
  double length = 0;          // perimeter, mm
  double theta = 0;           // initial tangent angle, rad
};

struct Weights {
  double alpha = 100.0;   // 1/rad^2
  double beta = 100.0;    // 1/rad^2
  double length = 0.1;    // 1/mm^2
  double theta = 0.0;     // 1/rad^2
};

inline constexpr double kPenaltyValue = 1e6;

enum class PenaltyReason {
  MissingInputPort,
  MissingOutputPort,
  MissingFixedVertex,
  MeshFailure,
  AnalysisFailure,
  DegeneratePath,
};

const char* penalty_reason_name(PenaltyReason r);

/// Fixed large objective value, strictly above any achievable path error
/// under the configured weights.
double penalize(PenaltyReason r);

/// Close an open path into a simple polygon with a thin return ribbon
/// offset laterally by 1% of the path length.  Falls back to a chord-offset
/// closure when the ribbon self-intersects; returns nullopt when both
/// fail (the caller penalizes).
std::optional<std::vector<Vec2>> close_curve(const std::vector<Vec2>& path);

/// Descriptors of a simple closed polygon: the first n_coeffs Fourier
/// coefficients of the normalized cumulative turning angle versus arc
/// length, the perimeter, and the initial tangent angle.
/// Throws GeometryError for degenerate polygons.
FsDescriptor fsd(const std::vector<Vec2>& polygon, int n_coeffs);

double total_error(const FsDescriptor& desired, const FsDescriptor& actual, const Weights& w);

/// Convenience: close + describe, or nullopt if the path cannot be closed.
std::optional<FsDescriptor> describe_path(const std::vector<Vec2>& path, int n_coeffs);

/// Outcome of one candidate evaluation.
struct EvalOutcome {
  double te = kPenaltyValue;
  std::optional<PenaltyReason> penalty;
  bool penalized() const { return penalty.has_value(); }
};

}  // namespace ccm
