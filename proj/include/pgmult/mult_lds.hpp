#pragma once

#include <cstdint>
#include <vector>

#include "pgmult/lds.hpp"
#include "pgmult/stick_breaking.hpp"

namespace pgmult {

// T x K count rows; categorical sequences are one-hot rows (N_t = 1).
struct SequenceData {
  IMat obs;
};

struct MultLDSState {
  LDSParams params;
  Mat states;  // T x D
  Mat omega;   // T x (K-1)
};

struct SBMLDSPriors {
  MNIWPrior dynamics;
  double c_row_precision = 1.0;

  static SBMLDSPriors standard(int dim) {
    return {MNIWPrior::standard(dim), 1.0};
  }
};

MultLDSState sbmlds_init(const SequenceData& data, int D, const SBMLDSPriors& priors,
                         RngKey key);

// One sweep: states via FFBS with the PG potentials mapped through C, then
// (A, B, C) from their conjugate conditionals, then omega. sample_params =
// false freezes the system parameters (Geweke runs, fixed-dynamics tests).
void sbmlds_gibbs_sweep(MultLDSState& state, const SequenceData& data,
                        const SBMLDSPriors& priors, RngKey key, std::uint64_t sweep,
                        bool sample_params = true);

std::vector<GaussianPotential> sbmlds_potentials(const SequenceData& data,
                                                 const Mat& omega);

// Forward simulation of the generative model.
IMat sbmlds_generate(const LDSParams& params, const IVec& totals, Rng& rng);

// Multinomial log likelihood of `future` under per-step probability rows.
double multinomial_forecast_ll(const Mat& probs, const IMat& future);

// log L normalized per count and anchored at the training-mean multinomial:
// (log L_model - log L_baseline) / total future counts. The baseline fits
// category probabilities proportional to training column sums + 0.5.
double normalized_predictive_ll(double model_log_lik, const IMat& train,
                                const IMat& future);

// Posterior predictive of the future block: Monte Carlo rollouts of the
// dynamics per retained sample, multinomial likelihoods averaged in
// probability space.
double sbmlds_predictive_ll(const std::vector<MultLDSState>& samples,
                            const IMat& future, int horizon, const IMat& train,
                            int n_rollouts, RngKey key);

struct SBMLDSFitResult {
  std::vector<MultLDSState> samples;
  std::vector<double> sweep_seconds;
};

SBMLDSFitResult sbmlds_fit(const SequenceData& train, int D,
                           const SBMLDSPriors& priors, int sweeps, int burnin,
                           int thin, RngKey key);

// Gaussian LDS fit directly to the count vectors (the misspecified baseline);
// its forecast is clamped at zero and renormalized to give a simplex, and it
// is scored with the same normalized likelihood.
double raw_lds_fit_predict(const IMat& train, const IMat& future, int D,
                           int sweeps, int burnin, int thin, int n_rollouts,
                           RngKey key);

}  // namespace pgmult
