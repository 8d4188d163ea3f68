#pragma once

// Random-mutation stochastic hill climber over the mixed design vector:
// strict-improvement acceptance, penalty-aware, fully reproducible under a
// fixed seed.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "ccm/domain.hpp"
#include "ccm/objective.hpp"

namespace ccm {

struct SearchConfig {
  double mutation_p = 0.08;
  int max_iterations = 1000;
  std::uint64_t seed = 1;
  double te_threshold = -1.0;  // stop when best <= threshold; off when negative
  int parallel_mutants = 1;    // >1: batch evaluation, first improvement by index
};

struct IterationRecord {
  int iteration = 0;
  double te = 0;
  bool accepted = false;
  double best = 0;
  bool penalized = false;
};

struct SearchResult {
  DesignVector best;
  double best_te = kPenaltyValue;
  std::vector<IterationRecord> history;
};

/// Each variable mutates independently with probability p: flags flip, the
/// shape selector resamples from {1,2,3}, continuous entries resample
/// uniformly within their bounds.
DesignVector mutate(const DesignDomain& d, const DesignVector& v, double p,
                    std::mt19937_64& rng);

using EvalFn = std::function<EvalOutcome(const DesignVector&)>;

/// Classic hill climber: mutate the incumbent, accept strictly better
/// objectives, keep mutating the incumbent otherwise.  Record 0 holds the
/// initial evaluation.
SearchResult run_search(const DesignDomain& d, const SearchConfig& cfg, const EvalFn& eval,
                        std::optional<DesignVector> initial = std::nullopt);

}  // namespace ccm
