#include "pgmult/mult_lds.hpp"

#include <chrono>
#include <cmath>

#include "pgmult/augmentation.hpp"
#include "pgmult/numerics.hpp"
#include "pgmult/parallel.hpp"

namespace pgmult {

namespace {

CountVector row_counts(const IMat& obs, int t) {
  IVec c = obs.row(t).transpose();
  return CountVector(c);
}

}  // namespace

std::vector<GaussianPotential> sbmlds_potentials(const SequenceData& data,
                                                 const Mat& omega) {
  const int T = static_cast<int>(data.obs.rows());
  std::vector<GaussianPotential> pots(T);
  for (int t = 0; t < T; ++t) {
    CountVector cv = row_counts(data.obs, t);
    pots[t] = {omega.row(t).transpose(), kappa(cv)};
  }
  return pots;
}

MultLDSState sbmlds_init(const SequenceData& data, int D, const SBMLDSPriors& priors,
                         RngKey key) {
  const int T = static_cast<int>(data.obs.rows());
  const int K = static_cast<int>(data.obs.cols());
  if (T < 1 || K < 1 || D < 1) throw ParameterError("sbmlds_init: bad sizes");
  (void)priors;

  MultLDSState state;
  state.params.A = 0.9 * Mat::Identity(D, D);
  state.params.B = Mat::Identity(D, D);
  state.params.mu0 = Vec::Zero(D);
  state.params.Sigma0 = Mat::Identity(D, D);
  Rng rng = key.lane(0, 0);
  state.params.C = Mat(K - 1, D);
  for (int k = 0; k < K - 1; ++k)
    for (int d = 0; d < D; ++d) state.params.C(k, d) = 0.1 * rng.normal();
  state.states = Mat::Zero(T, D);
  state.omega = Mat::Zero(T, K - 1);
  parallel_for(T, [&](std::size_t t) {
    Rng lane = key.lane(1, t);
    CountVector cv = row_counts(data.obs, static_cast<int>(t));
    state.omega.row(t) =
        sample_aux(cv, Vec::Zero(K - 1), lane).omega.transpose();
  });
  return state;
}

void sbmlds_gibbs_sweep(MultLDSState& state, const SequenceData& data,
                        const SBMLDSPriors& priors, RngKey key, std::uint64_t sweep,
                        bool sample_params) {
  const int T = static_cast<int>(data.obs.rows());

  // z_{1:T} | omega, x : jointly Gaussian given the diagonal potentials
  std::vector<GaussianPotential> pots = sbmlds_potentials(data, state.omega);
  Rng state_rng = key.lane(sweep * 4, 0);
  state.states = lds_ffbs(state.params, pots, state_rng);

  if (sample_params && T >= 2) {
    Rng param_rng = key.lane(sweep * 4 + 1, 0);
    LDSParamPriors lp{priors.dynamics, priors.c_row_precision};
    state.params =
        lds_param_posterior_sample(state.states, pots, state.params, lp, param_rng);
  }

  // omega_t | z_t, C, x
  parallel_for(T, [&](std::size_t t) {
    Rng rng = key.lane(sweep * 4 + 2, t);
    CountVector cv = row_counts(data.obs, static_cast<int>(t));
    Vec psi = state.params.C * state.states.row(t).transpose();
    state.omega.row(t) = sample_aux(cv, psi, rng).omega.transpose();
  });
}

IMat sbmlds_generate(const LDSParams& params, const IVec& totals, Rng& rng) {
  const int T = static_cast<int>(totals.size());
  const int K = static_cast<int>(params.C.rows()) + 1;
  IMat obs(T, K);
  Vec z = mvn_sample({params.mu0, params.Sigma0}, rng);
  Eigen::LLT<Mat> b_llt = chol_jittered(params.B, "sbmlds_generate");
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      Vec noise(z.size());
      for (int i = 0; i < z.size(); ++i) noise[i] = rng.normal();
      z = params.A * z + Mat(b_llt.matrixL()) * noise;
    }
    Vec pi = pi_sb(params.C * z);
    obs.row(t) = rng.multinomial(totals[t], pi).transpose();
  }
  return obs;
}

double multinomial_forecast_ll(const Mat& probs, const IMat& future) {
  if (probs.rows() != future.rows() || probs.cols() != future.cols())
    throw ParameterError("multinomial_forecast_ll: shape mismatch");
  double ll = 0.0;
  for (int t = 0; t < future.rows(); ++t) {
    long n = future.row(t).cast<long>().sum();
    ll += std::lgamma(static_cast<double>(n) + 1.0);
    for (int k = 0; k < future.cols(); ++k) {
      int x = future(t, k);
      if (x == 0) continue;
      ll -= std::lgamma(static_cast<double>(x) + 1.0);
      ll += x * std::log(std::max(probs(t, k), 1e-300));
    }
  }
  return ll;
}

namespace {

Mat training_mean_probs(const IMat& train, int rows) {
  Vec base = train.cast<double>().colwise().sum().transpose();
  base.array() += 0.5;  // keeps unseen categories scoreable
  base /= base.sum();
  Mat probs(rows, train.cols());
  for (int t = 0; t < rows; ++t) probs.row(t) = base.transpose();
  return probs;
}

}  // namespace

double normalized_predictive_ll(double model_log_lik, const IMat& train,
                                const IMat& future) {
  Mat base = training_mean_probs(train, static_cast<int>(future.rows()));
  double base_ll = multinomial_forecast_ll(base, future);
  long counts = future.cast<long>().sum();
  if (counts <= 0) throw DataError("normalized_predictive_ll: empty future block");
  return (model_log_lik - base_ll) / static_cast<double>(counts);
}

double sbmlds_predictive_ll(const std::vector<MultLDSState>& samples,
                            const IMat& future, int horizon, const IMat& train,
                            int n_rollouts, RngKey key) {
  if (samples.empty())
    throw ParameterError("sbmlds_predictive_ll: need posterior samples");
  if (horizon < 1 || future.rows() < horizon)
    throw ParameterError("sbmlds_predictive_ll: bad horizon");
  IMat fut = future.topRows(horizon);

  std::vector<double> lps(samples.size() * static_cast<std::size_t>(n_rollouts));
  parallel_for(samples.size(), [&](std::size_t s) {
    const MultLDSState& smp = samples[s];
    Eigen::LLT<Mat> b_llt = chol_jittered(smp.params.B, "sbmlds_predictive_ll");
    Mat bl = b_llt.matrixL();
    for (int r = 0; r < n_rollouts; ++r) {
      Rng rng = key.lane(s, static_cast<std::uint64_t>(r));
      Vec z = smp.states.row(smp.states.rows() - 1).transpose();
      double lp = 0.0;
      Mat probs(horizon, fut.cols());
      for (int h = 0; h < horizon; ++h) {
        Vec noise(z.size());
        for (int i = 0; i < z.size(); ++i) noise[i] = rng.normal();
        z = smp.params.A * z + bl * noise;
        probs.row(h) = pi_sb(smp.params.C * z).transpose();
      }
      lp = multinomial_forecast_ll(probs, fut);
      lps[s * static_cast<std::size_t>(n_rollouts) + r] = lp;
    }
  });
  double model_ll = logsumexp(lps) - std::log(static_cast<double>(lps.size()));
  return normalized_predictive_ll(model_ll, train, fut);
}

SBMLDSFitResult sbmlds_fit(const SequenceData& train, int D,
                           const SBMLDSPriors& priors, int sweeps, int burnin,
                           int thin, RngKey key) {
  SBMLDSFitResult result;
  MultLDSState state = sbmlds_init(train, D, priors, key);
  for (int s = 0; s < sweeps; ++s) {
    auto t0 = std::chrono::steady_clock::now();
    sbmlds_gibbs_sweep(state, train, priors, key, static_cast<std::uint64_t>(s) + 1);
    auto t1 = std::chrono::steady_clock::now();
    result.sweep_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    if (s >= burnin && (thin <= 1 || (s - burnin) % thin == 0))
      result.samples.push_back(state);
  }
  return result;
}

}  // namespace pgmult
