#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pgmult/gp.hpp"
#include "pgmult/stick_breaking.hpp"

namespace pgmult {

struct GPCountData {
  Mat inputs;   // M x D
  IMat counts;  // M x K
};

// Gibbs state for the multinomial GP: latent psi and auxiliaries per (input,
// output) pair, plus cached quantities that are fixed across sweeps.
struct MultGPState {
  Mat psi;    // M x (K-1)
  Mat omega;  // M x (K-1)
  GPSpec spec;

  Mat gram;       // kernel Gram at the training inputs
  Mat gram_inv;   // its inverse, factored once and shared by all outputs
  Mat kappa_mat;  // M x (K-1) evidence linear terms (fixed by the data)
};

MultGPState multgp_init(const GPCountData& data, GPSpec spec, RngKey key);

// One sweep: each output column psi_{:,k} redrawn jointly from its GP
// conditional, then all omega redrawn. Outputs are conditionally independent
// given omega, so the update order is irrelevant; reverse_order exists so
// tests can check exactly that.
void multgp_gibbs_sweep(MultGPState& state, const GPCountData& data, RngKey key,
                        std::uint64_t sweep, bool reverse_order = false);

struct MultGPPredictive {
  Mat mean_simplex;                   // n_test x K
  std::vector<std::vector<int>> top;  // per test input, k best categories
  std::vector<std::vector<int>> bottom;
};

// Collapsed prediction: for each retained omega sample the test-psi
// distribution is an analytic Gaussian (training psi integrated out); Monte
// Carlo draws are mapped through pi_sb and averaged over draws and samples.
MultGPPredictive multgp_predict(const std::vector<Mat>& omega_samples,
                                const MultGPState& state,
                                const Eigen::Ref<const Mat>& test_inputs,
                                int n_psi_draws, int top_k, RngKey key);

// Overlap of predicted and realized top-k / bottom-k category sets; ties
// break toward the smaller category index. Requires K >= 2k.
std::pair<int, int> topk_eval(const Eigen::Ref<const Vec>& predicted,
                              const Eigen::Ref<const IVec>& realized, int k);

// Multinomial thinning of full counts down to n per row (the sparse-data
// evaluation protocol).
IMat downsample_counts(const IMat& counts, int n, Rng& rng);

}  // namespace pgmult
