#include "ccm/search.hpp"

#include <future>

namespace ccm {

DesignVector mutate(const DesignDomain& d, const DesignVector& v, double p,
                    std::mt19937_64& rng) {
  DesignVector out = v;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < int(out.size()); ++i) {
    if (coin(rng) >= p) continue;
    const EntryInfo info = entry_info(d, i);
    switch (info.kind) {
      case EntryKind::PresenceFlag:
        out[i] = out[i] < 0.5 ? 1.0 : 0.0;
        break;
      case EntryKind::ShapeSelector: {
        std::uniform_int_distribution<int> pick(1, 3);
        out[i] = double(pick(rng));
        break;
      }
      case EntryKind::Continuous: {
        std::uniform_real_distribution<double> val(info.lo, info.hi);
        out[i] = val(rng);
        break;
      }
    }
  }
  return out;
}

SearchResult run_search(const DesignDomain& d, const SearchConfig& cfg, const EvalFn& eval,
                        std::optional<DesignVector> initial) {
  if (!(cfg.mutation_p > 0.0 && cfg.mutation_p <= 1.0))
    throw ConfigError("run_search: mutation probability must be in (0, 1]");
  std::mt19937_64 rng(cfg.seed);

  SearchResult res;
  DesignVector current = initial ? std::move(*initial) : initial_vector(d);
  EvalOutcome cur = eval(current);
  res.history.push_back({0, cur.te, true, cur.te, cur.penalized()});
  res.best = current;
  res.best_te = cur.te;

  const int batch = std::max(1, cfg.parallel_mutants);
  int iter = 0;
  while (iter < cfg.max_iterations) {
    if (cfg.te_threshold >= 0 && res.best_te <= cfg.te_threshold) break;

    // Mutants are drawn serially so the random stream is independent of the
    // evaluation schedule; acceptance is first improvement in index order.
    const int n = std::min(batch, cfg.max_iterations - iter);
    std::vector<DesignVector> mutants(n);
    for (int k = 0; k < n; ++k) mutants[k] = mutate(d, current, cfg.mutation_p, rng);

    std::vector<EvalOutcome> outs(n);
    if (n == 1) {
      outs[0] = eval(mutants[0]);
    } else {
      std::vector<std::future<EvalOutcome>> futs;
      futs.reserve(n);
      for (int k = 0; k < n; ++k)
        futs.push_back(std::async(std::launch::async, [&, k] { return eval(mutants[k]); }));
      for (int k = 0; k < n; ++k) outs[k] = futs[k].get();
    }

    int accepted_idx = -1;
    for (int k = 0; k < n; ++k) {
      ++iter;
      const bool accepted = accepted_idx < 0 && outs[k].te < cur.te;
      if (accepted) accepted_idx = k;
      if (accepted && outs[k].te < res.best_te) {
        res.best = mutants[k];
        res.best_te = outs[k].te;
      }
      res.history.push_back(
          {iter, outs[k].te, accepted, res.best_te, outs[k].penalized()});
    }
    if (accepted_idx >= 0) {
      current = std::move(mutants[accepted_idx]);
      cur = outs[accepted_idx];
    }
  }
  return res;
}

}  // namespace ccm
