#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pgmult/ctm.hpp"
#include "pgmult/polya_gamma.hpp"
#include "support/oracles.hpp"

using namespace pgmult;

TEST_CASE("svi expected omega matches direct numerical integration") {
  struct Case {
    double b, m, v;
  };
  for (const Case& c : {Case{6.0, 0.0, 1.0}, Case{3.5, 1.2, 0.4},
                        Case{10.0, -2.0, 2.5}, Case{1.0, 0.3, 1e-6}}) {
    double got = svi_expected_omega(c.b, c.m, c.v);
    double sd = std::sqrt(c.v);
    double direct = oracles::simpson(
        [&](double psi) {
          double z = (psi - c.m) / sd;
          double dens = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
          return dens * pg_mean({c.b, psi});
        },
        c.m - 10.0 * sd, c.m + 10.0 * sd, 4000);
    CHECK(std::fabs(got - direct) < 1e-3 * std::max(1.0, std::fabs(direct)));
  }
  CHECK(svi_expected_omega(0.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("full-batch svi with T=1 reproduces the exact dirichlet posterior") {
  Corpus corpus;
  corpus.vocab_size = 4;
  corpus.docs = {{0, 0, 1}, {2, 3, 3, 3}};
  CTMHyper hyper;
  hyper.alpha_beta = 0.7;
  CTMVarState vs = ctm_svi_init(corpus, 1, hyper);
  std::vector<int> all = {0, 1};
  ctm_svi_step(vs, corpus, all, 1.0, {111, 0}, 0);
  // counts: word 0 x2, word 1 x1, word 2 x1, word 3 x3
  CHECK(vs.beta_alpha(0, 0) == doctest::Approx(0.7 + 2.0).epsilon(1e-12));
  CHECK(vs.beta_alpha(0, 1) == doctest::Approx(0.7 + 1.0).epsilon(1e-12));
  CHECK(vs.beta_alpha(0, 2) == doctest::Approx(0.7 + 1.0).epsilon(1e-12));
  CHECK(vs.beta_alpha(0, 3) == doctest::Approx(0.7 + 3.0).epsilon(1e-12));
}

TEST_CASE("minibatch sufficient statistics are unbiased (exact enumeration)") {
  Rng gen(121);
  Vec mu(1);
  mu << 0.3;
  auto [corpus, truth] =
      ctm_generate(2, 4, 3, 6, mu, Mat::Identity(1, 1), 0.5, gen);
  CTMHyper hyper;
  hyper.alpha_beta = 0.5;
  hyper.niw = NIWParams::standard(1);

  auto fresh = [&]() { return ctm_svi_init(corpus, 2, hyper); };

  CTMVarState full = fresh();
  ctm_svi_step(full, corpus, {0, 1, 2}, 1.0, {122, 0}, 0);

  Mat beta_acc = Mat::Zero(2, 4);
  double n_acc = 0.0;
  Vec psi_acc = Vec::Zero(1);
  Mat scatter_acc = Mat::Zero(1, 1);
  for (int d = 0; d < 3; ++d) {
    CTMVarState one = fresh();
    ctm_svi_step(one, corpus, {d}, 1.0, {122, 0}, 0);
    beta_acc += one.beta_ss;
    n_acc += one.n_ss;
    psi_acc += one.psi_sum_ss;
    scatter_acc += one.psi_scatter_ss;
  }
  beta_acc /= 3.0;
  n_acc /= 3.0;
  psi_acc /= 3.0;
  scatter_acc /= 3.0;

  CHECK((beta_acc - full.beta_ss).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::fabs(n_acc - full.n_ss) < 1e-12);
  CHECK((psi_acc - full.psi_sum_ss).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((scatter_acc - full.psi_scatter_ss).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("full-batch svi stabilizes and tracks the gibbs estimate") {
  Rng gen(131);
  Vec mu(1);
  mu << -0.4;
  Mat Sigma = Mat::Constant(1, 1, 0.8);
  auto [corpus, truth] = ctm_generate(2, 12, 28, 30, mu, Sigma, 0.2, gen);
  Corpus train, test;
  train.vocab_size = test.vocab_size = corpus.vocab_size;
  train.docs.assign(corpus.docs.begin(), corpus.docs.begin() + 20);
  test.docs.assign(corpus.docs.begin() + 20, corpus.docs.end());

  CTMHyper hyper;
  hyper.alpha_beta = 0.2;
  hyper.niw = NIWParams::standard(1);

  CTMVarState vs = ctm_svi_init(train, 2, hyper);
  std::vector<int> all(train.docs.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<double> lls;
  const int steps = 45;
  for (int s = 0; s < steps; ++s) {
    double rho = std::pow(2.0 + s, -0.7);
    ctm_svi_step(vs, train, all, rho, {132, 0}, static_cast<std::uint64_t>(s));
    lls.push_back(
        heldout_predictive_ll({ctm_svi_point_estimate(vs)}, test, 0.5, {133, 0}));
  }
  double lo = lls.back(), hi = lls.back();
  for (int s = steps - 10; s < steps; ++s) {
    lo = std::min(lo, lls[s]);
    hi = std::max(hi, lls[s]);
  }
  CHECK(hi - lo < 0.01);

  CTMFitResult gibbs = ctm_fit(train, 2, hyper, 150, 50, 4, {134, 0});
  double gibbs_ll = heldout_predictive_ll(gibbs.samples, test, 0.5, {133, 0});
  CHECK(std::fabs(lls.back() - gibbs_ll) < 0.1);
}
