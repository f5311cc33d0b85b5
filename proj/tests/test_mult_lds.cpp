#include <doctest.h>

#include <cmath>

#include "pgmult/augmentation.hpp"
#include "pgmult/mult_lds.hpp"
#include "support/geweke.hpp"
#include "support/oracles.hpp"

using namespace pgmult;

namespace {

LDSParams fixed_params(int D, int K, double a, double b, double sigma0, Rng& rng,
                       double emit = 1.0) {
  LDSParams p;
  p.A = a * Mat::Identity(D, D);
  p.B = b * Mat::Identity(D, D);
  p.mu0 = Vec::Zero(D);
  p.Sigma0 = sigma0 * Mat::Identity(D, D);
  p.C = Mat(K - 1, D);
  for (int k = 0; k < K - 1; ++k)
    for (int d = 0; d < D; ++d) p.C(k, d) = emit * rng.normal();
  return p;
}

Mat baseline_probs(const IMat& train, int rows) {
  Vec base = train.cast<double>().colwise().sum().transpose();
  base.array() += 0.5;
  base /= base.sum();
  Mat probs(rows, train.cols());
  for (int t = 0; t < rows; ++t) probs.row(t) = base.transpose();
  return probs;
}

}  // namespace

TEST_CASE("single-category sequences carry no evidence") {
  SequenceData data;
  data.obs = IMat(6, 1);
  data.obs << 3, 1, 4, 1, 5, 9;
  SBMLDSPriors priors = SBMLDSPriors::standard(2);
  MultLDSState state = sbmlds_init(data, 2, priors, {201, 0});
  CHECK(state.params.C.rows() == 0);
  CHECK(state.omega.cols() == 0);

  // the smoother under empty potentials is the prior recursion
  std::vector<GaussianPotential> pots = sbmlds_potentials(data, state.omega);
  SmoothedMoments sm = lds_smoother(state.params, pots);
  Vec m = state.params.mu0;
  Mat p = state.params.Sigma0;
  std::vector<Mat> prior_cov(6);
  for (int t = 0; t < 6; ++t) {
    if (t > 0) {
      m = state.params.A * m;
      p = state.params.A * p * state.params.A.transpose() + state.params.B;
    }
    prior_cov[t] = p;
    CHECK((sm.mean[t] - m).cwiseAbs().maxCoeff() < 1e-10);
  }
  // the smoothed covariance at the last step equals the prior covariance
  CHECK((sm.cov[5] - prior_cov[5]).cwiseAbs().maxCoeff() < 1e-8);

  sbmlds_gibbs_sweep(state, data, priors, {201, 0}, 1, false);
  CHECK(state.states.rows() == 6);
}

TEST_CASE("T=1 chain matches the quadrature oracle") {
  SequenceData data;
  data.obs = IMat(1, 2);
  data.obs << 1, 0;
  SBMLDSPriors priors = SBMLDSPriors::standard(1);
  MultLDSState state;
  state.params.A = Mat::Identity(1, 1);
  state.params.B = Mat::Identity(1, 1);
  state.params.C = Mat::Identity(1, 1);
  state.params.mu0 = Vec::Zero(1);
  state.params.Sigma0 = Mat::Identity(1, 1);
  state.states = Mat::Zero(1, 1);
  state.omega = Mat::Zero(1, 1);
  Rng init(202);
  state.omega(0, 0) = 0.0;

  oracles::ScalarPosteriorCdf cdf;
  std::vector<double> kept;
  const int burn = 2000, keep = 80000;
  for (int i = 0; i < burn + keep; ++i) {
    sbmlds_gibbs_sweep(state, data, priors, {203, 0},
                       static_cast<std::uint64_t>(i) + 1, false);
    if (i >= burn) kept.push_back(state.states(0, 0));
  }
  CHECK(oracles::ks_statistic(kept, [&](double v) { return cdf(v); }) < 0.01);
}

TEST_CASE("geweke joint test for the sbmlds sweep (fixed parameters)") {
  const int T = 4, D = 2, K = 3, N = 5;
  Rng setup(204);
  LDSParams params = fixed_params(D, K, 0.7, 0.4, 1.0, setup, 0.8);

  struct State {
    MultLDSState lds;
    SequenceData data;
  };
  auto forward = [&](Rng& rng) {
    State s;
    s.lds.params = params;
    s.lds.states = Mat(T, D);
    Vec z = mvn_sample({params.mu0, params.Sigma0}, rng);
    Eigen::LLT<Mat> bl(params.B);
    s.data.obs = IMat(T, K);
    for (int t = 0; t < T; ++t) {
      if (t > 0) {
        Vec noise(D);
        for (int i = 0; i < D; ++i) noise[i] = rng.normal();
        z = params.A * z + Mat(bl.matrixL()) * noise;
      }
      s.lds.states.row(t) = z.transpose();
      s.data.obs.row(t) = rng.multinomial(N, pi_sb(params.C * z)).transpose();
    }
    s.lds.omega = Mat(T, K - 1);
    for (int t = 0; t < T; ++t) {
      IVec row = s.data.obs.row(t).transpose();
      Vec psi = params.C * s.lds.states.row(t).transpose();
      s.lds.omega.row(t) = sample_aux(CountVector(row), psi, rng).omega.transpose();
    }
    return s;
  };
  auto step = [&](State& s, Rng& rng, int sweep) {
    RngKey key{rng.fork(880, static_cast<std::uint64_t>(sweep)).key(), 0};
    sbmlds_gibbs_sweep(s.lds, s.data, SBMLDSPriors::standard(D), key, 1, false);
    // resample the data, then refresh omega: (x, omega) | z is a block
    // because omega's residual counts depend on x
    for (int t = 0; t < T; ++t) {
      Vec psi = s.lds.params.C * s.lds.states.row(t).transpose();
      s.data.obs.row(t) = rng.multinomial(N, pi_sb(psi)).transpose();
      IVec row = s.data.obs.row(t).transpose();
      s.lds.omega.row(t) = sample_aux(CountVector(row), psi, rng).omega.transpose();
    }
  };
  auto stats = [&](const State& s) {
    Vec v(8);
    v << s.lds.states(0, 0), s.lds.states(2, 1),
        s.lds.states(0, 0) * s.lds.states(0, 0),
        s.lds.states(0, 0) * s.lds.states(1, 0), s.lds.states.col(0).mean(),
        s.data.obs(0, 0), s.data.obs(3, 1), s.data.obs(0, 0) * s.data.obs(0, 0);
    return v;
  };
  geweke::Result r = geweke::run<State>(forward, step, stats, 20000, 50000, 2,
                                        Rng(901), Rng(902));
  CHECK(r.max_abs_z() < 4.0);
}

TEST_CASE("huge state noise decouples timesteps to single-site chains") {
  const int T = 3, K = 3, D = 2;
  SequenceData data;
  data.obs = IMat(T, K);
  for (int t = 0; t < T; ++t) data.obs.row(t) << 2, 2, 1;

  MultLDSState state;
  state.params.A = Mat::Identity(D, D);
  state.params.B = 1e8 * Mat::Identity(D, D);
  state.params.Sigma0 = 1e8 * Mat::Identity(D, D);
  state.params.mu0 = Vec::Zero(D);
  state.params.C = Mat::Identity(K - 1, D);
  state.states = Mat::Zero(T, D);
  state.omega = Mat::Zero(T, K - 1);

  SBMLDSPriors priors = SBMLDSPriors::standard(D);
  std::vector<double> psi_chain;
  const int n = 30000;
  for (int i = 0; i < n + 500; ++i) {
    sbmlds_gibbs_sweep(state, data, priors, {205, 0},
                       static_cast<std::uint64_t>(i) + 1, false);
    if (i >= 500) psi_chain.push_back(state.states(1, 0));  // psi = C z = z
  }

  // isolated single-site chain with a flat prior
  Rng iso(206);
  IVec row(3);
  row << 2, 2, 1;
  CountVector cv(row);
  Vec psi = Vec::Zero(2);
  std::vector<double> iso_chain;
  for (int i = 0; i < n + 500; ++i) {
    PGAuxiliaries aux = sample_aux(cv, psi, iso);
    MVNParams post = condition_diag(Vec::Zero(2), 1e8 * Mat::Identity(2, 2),
                                    evidence(cv, aux));
    psi = mvn_sample(post, iso);
    if (i >= 500) iso_chain.push_back(psi[0]);
  }
  oracles::Moments a = oracles::moments(psi_chain);
  oracles::Moments b = oracles::moments(iso_chain);
  double se = std::sqrt(oracles::batch_means_se(psi_chain) *
                            oracles::batch_means_se(psi_chain) +
                        oracles::batch_means_se(iso_chain) *
                            oracles::batch_means_se(iso_chain));
  CHECK(std::fabs(a.mean - b.mean) < 5.0 * se);
  CHECK(a.var == doctest::Approx(b.var).epsilon(0.15));
}

TEST_CASE("time reversal with orthogonal dynamics preserves the likelihood") {
  const int D = 2, K = 3, T = 6;
  double theta = 0.7, b = 0.3;
  Mat rot(2, 2);
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Rng rng(207);
  Mat c_emit(K - 1, D);
  for (int k = 0; k < K - 1; ++k)
    for (int d = 0; d < D; ++d) c_emit(k, d) = rng.normal();

  Mat states(T, D);
  Vec z(2);
  z << rng.normal(), rng.normal();
  states.row(0) = z.transpose();
  IMat obs(T, K);
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      Vec noise(2);
      noise << rng.normal(), rng.normal();
      z = rot * z + std::sqrt(b) * noise;
      states.row(t) = z.transpose();
    }
    obs.row(t) =
        rng.multinomial(5, pi_sb(c_emit * states.row(t).transpose())).transpose();
  }

  auto complete_loglik = [&](const Mat& zs, const IMat& xs, const Mat& a_dyn) {
    double ll = 0.0;
    for (int t = 1; t < T; ++t) {
      Vec innov = zs.row(t).transpose() - a_dyn * zs.row(t - 1).transpose();
      ll += -0.5 * innov.squaredNorm() / b - std::log(2.0 * M_PI * b);
    }
    for (int t = 0; t < T; ++t) {
      IVec row = xs.row(t).transpose();
      ll += log_multinomial_sb(CountVector(row), c_emit * zs.row(t).transpose());
    }
    return ll;
  };

  Mat states_rev = states.colwise().reverse();
  IMat obs_rev = obs.colwise().reverse();
  double fwd = complete_loglik(states, obs, rot);
  double rev = complete_loglik(states_rev, obs_rev, rot.transpose());
  CHECK(fwd == doctest::Approx(rev).epsilon(1e-10));
}

TEST_CASE("normalized predictive anchors") {
  Rng rng(208);
  IMat train(20, 4);
  for (int t = 0; t < 20; ++t)
    train.row(t) = rng.multinomial(10, Vec::Constant(4, 0.25)).transpose();
  IMat future(5, 4);
  for (int t = 0; t < 5; ++t)
    future.row(t) = rng.multinomial(10, Vec::Constant(4, 0.25)).transpose();

  // a model identical to the training-mean baseline scores exactly zero
  double base_ll = multinomial_forecast_ll(baseline_probs(train, 5), future);
  CHECK(normalized_predictive_ll(base_ll, train, future) == 0.0);

  // a near-oracle model on a deterministic single-category future scores
  // -log(baseline probability of that category) per count
  IMat single(3, 4);
  single.setZero();
  single.col(2).setConstant(7);
  Mat oracle_probs = Mat::Constant(3, 4, 1e-9);
  oracle_probs.col(2).setConstant(1.0 - 3e-9);
  double oracle_ll = multinomial_forecast_ll(oracle_probs, single);
  double norm = normalized_predictive_ll(oracle_ll, train, single);
  Vec base = train.cast<double>().colwise().sum().transpose();
  base.array() += 0.5;
  base /= base.sum();
  CHECK(norm == doctest::Approx(-std::log(base[2])).epsilon(1e-4));
  CHECK(norm > 0.0);
}

TEST_CASE("sbmlds beats the raw lds on its own synthetic data") {
  Rng gen(209);
  LDSParams truth = fixed_params(2, 8, 0.95, 0.05, 0.3, gen, 1.2);
  // rotate a bit so the latent path has structure
  double th = 0.4;
  Mat rot(2, 2);
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  truth.A = 0.97 * rot;
  IVec totals = IVec::Constant(210, 10);
  IMat obs = sbmlds_generate(truth, totals, gen);
  IMat train = obs.topRows(200);
  IMat future = obs.bottomRows(10);

  SBMLDSPriors priors = SBMLDSPriors::standard(2);
  SequenceData seq{train};
  SBMLDSFitResult fit = sbmlds_fit(seq, 2, priors, 80, 40, 4, {210, 0});
  double sbm = sbmlds_predictive_ll(fit.samples, future, 10, train, 100, {211, 0});
  double raw = raw_lds_fit_predict(train, future, 2, 80, 40, 4, 100, {212, 0});
  CHECK(sbm > raw);
}

TEST_CASE("raw lds reference behavior") {
  // constant sequence: the forecast reproduces the training mean
  IMat constant(60, 3);
  for (int t = 0; t < 60; ++t) constant.row(t) << 5, 3, 2;
  IMat future(5, 3);
  for (int t = 0; t < 5; ++t) future.row(t) << 5, 3, 2;
  double val = raw_lds_fit_predict(constant, future, 1, 60, 30, 3, 50, {213, 0});
  CHECK(std::fabs(val) < 0.05);

  // iid draws with a degenerate single state dimension
  Rng rng(214);
  Vec probs(3);
  probs << 0.5, 0.3, 0.2;
  IMat iid(80, 3), iid_future(5, 3);
  for (int t = 0; t < 80; ++t) iid.row(t) = rng.multinomial(20, probs).transpose();
  for (int t = 0; t < 5; ++t)
    iid_future.row(t) = rng.multinomial(20, probs).transpose();
  double v2 = raw_lds_fit_predict(iid, iid_future, 1, 60, 30, 3, 50, {215, 0});
  CHECK(std::fabs(v2) < 0.05);
}
