// Gaussian LDS applied directly to count vectors: the misspecified baseline.
// Counts are centered by the training mean, states and parameters are drawn
// by Gibbs (FFBS states, MNIW dynamics, row-wise emission regression,
// inverse-gamma observation variances), and forecasts are mapped to the
// simplex by clamping negatives at zero and renormalizing.

#include <cmath>

#include "pgmult/mult_lds.hpp"
#include "pgmult/numerics.hpp"
#include "pgmult/parallel.hpp"

namespace pgmult {

namespace {

struct RawLDSState {
  LDSParams params;  // C here is K x D
  Vec r;             // diagonal observation variances, length K
  Mat states;        // T x D
};

std::vector<GaussianPotential> raw_potentials(const Mat& centered, const Vec& r) {
  std::vector<GaussianPotential> pots(centered.rows());
  Vec prec = r.cwiseInverse();
  for (int t = 0; t < centered.rows(); ++t)
    pots[t] = {prec, centered.row(t).transpose().cwiseProduct(prec)};
  return pots;
}

}  // namespace

double raw_lds_fit_predict(const IMat& train, const IMat& future, int D,
                           int sweeps, int burnin, int thin, int n_rollouts,
                           RngKey key) {
  const int T = static_cast<int>(train.rows());
  const int K = static_cast<int>(train.cols());
  if (T < 3) throw DataError("raw_lds_fit_predict: sequence too short");

  Mat y = train.cast<double>();
  Vec ybar = y.colwise().mean().transpose();
  Mat centered = y.rowwise() - ybar.transpose();

  RawLDSState state;
  state.params.A = 0.9 * Mat::Identity(D, D);
  state.params.B = Mat::Identity(D, D);
  state.params.mu0 = Vec::Zero(D);
  state.params.Sigma0 = Mat::Identity(D, D);
  state.r = Vec::Ones(K);
  Rng init_rng = key.lane(0, 0);
  state.params.C = Mat(K, D);
  for (int k = 0; k < K; ++k)
    for (int d = 0; d < D; ++d) state.params.C(k, d) = 0.1 * init_rng.normal();
  state.states = Mat::Zero(T, D);

  const double ig_a0 = 2.0, ig_b0 = 0.5;  // weak inverse-gamma prior on r_k
  MNIWPrior dyn = MNIWPrior::standard(D);

  std::vector<Mat> kept_c;
  std::vector<Mat> kept_a;
  std::vector<Mat> kept_b;
  std::vector<Vec> kept_last;
  for (int s = 0; s < sweeps; ++s) {
    std::uint64_t sw = static_cast<std::uint64_t>(s) + 1;
    // states
    std::vector<GaussianPotential> pots = raw_potentials(centered, state.r);
    Rng state_rng = key.lane(sw * 4, 0);
    state.states = lds_ffbs(state.params, pots, state_rng);

    // dynamics + emission via the shared conjugate machinery
    Rng param_rng = key.lane(sw * 4 + 1, 0);
    LDSParamPriors lp{dyn, 1.0};
    state.params = lds_param_posterior_sample(state.states, pots, state.params,
                                              lp, param_rng);

    // observation variances r_k | C, z
    Rng r_rng = key.lane(sw * 4 + 2, 0);
    Mat resid = centered - state.states * state.params.C.transpose();
    for (int k = 0; k < K; ++k) {
      double ssq = resid.col(k).squaredNorm();
      state.r[k] = r_rng.inv_gamma(ig_a0 + 0.5 * T, ig_b0 + 0.5 * ssq);
    }

    if (s >= burnin && (thin <= 1 || (s - burnin) % thin == 0)) {
      kept_c.push_back(state.params.C);
      kept_a.push_back(state.params.A);
      kept_b.push_back(state.params.B);
      kept_last.push_back(state.states.row(T - 1).transpose());
    }
  }
  if (kept_c.empty()) throw ParameterError("raw_lds_fit_predict: no kept samples");

  const int horizon = static_cast<int>(future.rows());
  std::vector<double> lps(kept_c.size() * static_cast<std::size_t>(n_rollouts));
  parallel_for(kept_c.size(), [&](std::size_t s) {
    Eigen::LLT<Mat> b_llt = chol_jittered(kept_b[s], "raw_lds_predict");
    Mat bl = b_llt.matrixL();
    for (int r = 0; r < n_rollouts; ++r) {
      Rng rng = key.lane(1000 + s, static_cast<std::uint64_t>(r));
      Vec z = kept_last[s];
      Mat probs(horizon, K);
      for (int h = 0; h < horizon; ++h) {
        Vec noise(z.size());
        for (int i = 0; i < z.size(); ++i) noise[i] = rng.normal();
        z = kept_a[s] * z + bl * noise;
        Vec forecast = kept_c[s] * z + ybar;
        Vec clamped = forecast.cwiseMax(0.0).array() + 1e-12;
        probs.row(h) = (clamped / clamped.sum()).transpose();
      }
      lps[s * static_cast<std::size_t>(n_rollouts) + r] =
          multinomial_forecast_ll(probs, future);
    }
  });
  double model_ll = logsumexp(lps) - std::log(static_cast<double>(lps.size()));
  return normalized_predictive_ll(model_ll, train, future);
}

}  // namespace pgmult
