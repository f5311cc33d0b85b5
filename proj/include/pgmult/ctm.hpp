#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pgmult/gaussian.hpp"
#include "pgmult/stick_breaking.hpp"

namespace pgmult {

struct Corpus {
  std::vector<std::vector<int>> docs;  // token ids per document
  int vocab_size = 0;

  long total_tokens() const {
    long n = 0;
    for (const auto& d : docs) n += static_cast<long>(d.size());
    return n;
  }
};

struct CTMHyper {
  double alpha_beta = 0.1;  // topic Dirichlet concentration
  NIWParams niw;            // prior on (mu, Sigma), dimension T-1
};

// Full Gibbs state of one SB-CTM chain. counts(d, t) always equals the number
// of tokens in document d assigned to topic t.
struct CTMState {
  Mat topics;  // T x V, rows on the simplex
  Mat psi;     // D x (T-1)
  Mat omega;   // D x (T-1)
  std::vector<std::vector<int>> z;
  Vec mu;
  Mat Sigma;
  Mat counts;  // D x T
  CTMHyper hyper;

  int n_topics() const { return static_cast<int>(topics.rows()); }
};

// Synthetic corpus with known latents: topics ~ Dir(alpha_beta), psi_d ~
// N(mu, Sigma), theta_d = pi_sb(psi_d).
std::pair<Corpus, CTMState> ctm_generate(int T, int V, int D, int doc_len,
                                         const Eigen::Ref<const Vec>& mu,
                                         const Eigen::Ref<const Mat>& Sigma,
                                         double alpha_beta, Rng& rng);

CTMState ctm_init(const Corpus& corpus, int T, const CTMHyper& hyper, RngKey key);

// One full five-block sweep: z | w,beta,psi ; beta | z,w ; psi | z,mu,Sigma,
// omega ; (mu,Sigma) | psi ; omega | psi,z. Document-local blocks run in
// parallel across documents with rng lanes keyed by (chain, sweep, lane);
// lane_ids, when given, pins each document's lane so relabeling documents
// together with their lanes reproduces a run bitwise.
void ctm_gibbs_sweep(CTMState& state, const Corpus& corpus, RngKey key,
                     std::uint64_t sweep,
                     const std::vector<std::uint64_t>& lane_ids = {});

struct CTMSample {
  Mat topics;
  Vec mu;
  Mat Sigma;
  Mat psi;  // D x (T-1), retained for posterior diagnostics
};

struct HeldoutOpts {
  int local_burn = 30;
  int local_kept = 15;
};

// Document-completion evaluation: condition on a random split_ratio share of
// each test document's tokens (local Gibbs with fixed globals), average the
// predictive probability of the held-out share over posterior samples and
// local draws. Returns mean log probability per held-out token.
double heldout_predictive_ll(const std::vector<CTMSample>& samples,
                             const Corpus& test, double split_ratio, RngKey key,
                             const HeldoutOpts& opts = {});

// Posterior mean of the correlation matrix of theta, estimated by mapping
// N(mu, Sigma) draws through pi_sb for each retained sample.
Mat topic_correlation(const std::vector<CTMSample>& samples, int n_mc, RngKey key);

struct CTMFitResult {
  std::vector<CTMSample> samples;
  std::vector<double> sweep_seconds;
  std::vector<double> train_per_token_ll;
};

CTMFitResult ctm_fit(const Corpus& corpus, int T, const CTMHyper& hyper,
                     int sweeps, int burnin, int thin, RngKey key);

// ---- collapsed-Gibbs LDA baseline ----

struct LDASample {
  Mat topics;  // T x V
};

std::vector<LDASample> lda_collapsed_gibbs(const Corpus& corpus, int T,
                                           double alpha_theta, double alpha_beta,
                                           int sweeps, int burnin, int thin,
                                           RngKey key);

double lda_heldout_predictive_ll(const std::vector<LDASample>& samples,
                                 const Corpus& test, double split_ratio,
                                 double alpha_theta, RngKey key,
                                 const HeldoutOpts& opts = {});

// ---- stochastic variational inference ----

// Global variational factors plus the blended expected sufficient statistics
// they are derived from; natural-gradient steps are convex combinations on
// the statistics.
struct CTMVarState {
  int T = 0;
  CTMHyper hyper;
  Mat beta_alpha;  // T x V Dirichlet parameters of q(beta)
  NIWParams niw_post;

  Mat beta_ss;  // expected topic-word counts
  double n_ss = 0.0;
  Vec psi_sum_ss;
  Mat psi_scatter_ss;

  int mc_elogtheta = 20;  // Monte Carlo draws for E[log theta]
  int inner_iters = 5;    // local fixed-point iterations per step
};

CTMVarState ctm_svi_init(const Corpus& corpus, int T, const CTMHyper& hyper);

struct SviLocal {
  Mat resp;      // n_tokens x T responsibilities
  Vec psi_mean;  // q(psi_d) mean
  Mat psi_cov;
  Vec exp_omega;
  Vec exp_kappa;
};

SviLocal ctm_svi_local(const CTMVarState& vs, const std::vector<int>& doc, Rng& rng);

// One SVI step: local factors for the minibatch, then global statistics
// blended with weight step_size after scaling by corpus_size / |minibatch|.
void ctm_svi_step(CTMVarState& vs, const Corpus& corpus,
                  const std::vector<int>& minibatch, double step_size, RngKey key,
                  std::uint64_t step_index);

CTMSample ctm_svi_point_estimate(const CTMVarState& vs);

// E[omega] = b * E[tanh(psi/2) / (2 psi)] under q(psi) = N(mean, var), the
// Gaussian expectation evaluated by Gauss-Hermite quadrature.
double svi_expected_omega(double exp_residual, double psi_mean, double psi_var);

}  // namespace pgmult
