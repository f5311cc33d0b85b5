// Getting-it-right style joint-distribution test: compare moments of
// statistics under (a) forward simulation of the full joint and (b) a chain
// of Gibbs transitions that also resamples the data. Correct samplers make
// the two indistinguishable; each statistic gets a z-score.
#pragma once

#include <vector>

#include "pgmult/rng.hpp"
#include "pgmult/types.hpp"
#include "support/oracles.hpp"

namespace geweke {

using pgmult::Rng;
using pgmult::Vec;

struct Result {
  Vec z;  // per-statistic z-scores

  double max_abs_z() const { return z.size() ? z.cwiseAbs().maxCoeff() : 0.0; }
};

// ForwardFn: Rng& -> State (a fresh joint draw)
// StepFn:   State&, Rng&, sweep -> void (one Gibbs transition incl. data)
// StatFn:   const State& -> Vec
template <class State, class ForwardFn, class StepFn, class StatFn>
Result run(ForwardFn forward, StepFn step, StatFn stats, int n_forward,
           int n_gibbs, int thin, pgmult::Rng fwd_rng, pgmult::Rng gibbs_rng) {
  std::vector<std::vector<double>> fwd_stats, gbs_stats;
  int dim = -1;

  for (int i = 0; i < n_forward; ++i) {
    State s = forward(fwd_rng);
    Vec v = stats(s);
    if (dim < 0) {
      dim = static_cast<int>(v.size());
      fwd_stats.resize(dim);
      gbs_stats.resize(dim);
    }
    for (int d = 0; d < dim; ++d) fwd_stats[d].push_back(v[d]);
  }

  State s = forward(gibbs_rng);
  for (int i = 0; i < n_gibbs; ++i) {
    step(s, gibbs_rng, i);
    if (i % thin == 0) {
      Vec v = stats(s);
      for (int d = 0; d < dim; ++d) gbs_stats[d].push_back(v[d]);
    }
  }

  Result out;
  out.z = Vec(dim);
  for (int d = 0; d < dim; ++d) {
    oracles::Moments mf = oracles::moments(fwd_stats[d]);
    oracles::Moments mg = oracles::moments(gbs_stats[d]);
    double se_g = oracles::batch_means_se(gbs_stats[d]);
    double denom = std::sqrt(mf.se * mf.se + se_g * se_g);
    out.z[d] = denom > 0.0 ? (mf.mean - mg.mean) / denom : 0.0;
  }
  return out;
}

}  // namespace geweke
