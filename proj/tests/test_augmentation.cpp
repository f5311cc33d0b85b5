#include <doctest.h>

#include <cmath>

#include "pgmult/augmentation.hpp"
#include "pgmult/gaussian.hpp"
#include "pgmult/polya_gamma.hpp"
#include "support/geweke.hpp"
#include "support/oracles.hpp"

using namespace pgmult;

namespace {

IVec make_ivec(std::initializer_list<int> xs) {
  IVec v(static_cast<int>(xs.size()));
  int i = 0;
  for (int x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("sample_aux trivial shapes") {
  Rng rng(2);
  PGAuxiliaries aux = sample_aux(CountVector(make_ivec({0, 0, 0})), Vec::Zero(2), rng);
  CHECK(aux.omega.size() == 2);
  CHECK(aux.omega[0] == 0.0);
  CHECK(aux.omega[1] == 0.0);

  aux = sample_aux(CountVector(make_ivec({5})), Vec(0), rng);
  CHECK(aux.omega.size() == 0);
}

TEST_CASE("sample_aux means follow pg_mean") {
  const int n = 100000;
  Rng rng(12);
  CountVector x(make_ivec({3, 2, 1}));
  Vec psi = Vec::Zero(2);
  std::vector<double> o1(n), o2(n);
  for (int i = 0; i < n; ++i) {
    PGAuxiliaries aux = sample_aux(x, psi, rng);
    o1[i] = aux.omega[0];
    o2[i] = aux.omega[1];
  }
  oracles::Moments m1 = oracles::moments(o1);
  oracles::Moments m2 = oracles::moments(o2);
  CHECK(std::fabs(m1.mean - 6.0 / 4.0) < 4.0 * m1.se);
  CHECK(std::fabs(m2.mean - 3.0 / 4.0) < 4.0 * m2.se);
}

TEST_CASE("evidence and the conjugate update") {
  // scalar example: x=(1,0), omega=0.25, prior N(0,1) -> N(0.4, 0.8)
  CountVector x(make_ivec({1, 0}));
  GaussianPotential pot = evidence(x, {Vec::Constant(1, 0.25)});
  CHECK(pot.linear[0] == doctest::Approx(0.5));
  MVNParams post = condition_diag(Vec::Zero(1), Mat::Identity(1, 1), pot);
  CHECK(post.mean[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(post.cov(0, 0) == doctest::Approx(0.8).epsilon(1e-12));

  // no evidence -> prior unchanged
  GaussianPotential none{Vec::Zero(2), Vec::Zero(2)};
  Mat Sigma(2, 2);
  Sigma << 1.3, 0.4, 0.4, 0.9;
  Vec mu(2);
  mu << 0.3, -0.7;
  MVNParams same = condition_diag(mu, Sigma, none);
  CHECK((same.mean - mu).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((same.cov - Sigma).cwiseAbs().maxCoeff() < 1e-10);

  // x=(3,2,1), omega=(1,1), prior N(0, I): mean (0, 0.25), cov diag(0.5)
  CountVector x2(make_ivec({3, 2, 1}));
  MVNParams post2 = condition_diag(Vec::Zero(2), Mat::Identity(2, 2),
                                   evidence(x2, {Vec::Ones(2)}));
  CHECK(post2.mean[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(post2.mean[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(post2.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(post2.cov(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero-count coordinates leave the prior conditional untouched") {
  // x = (n, 0, 0): N_2 = 0, so omega_2 = 0 and kappa_2 = 0
  Rng rng(9);
  CountVector x(make_ivec({4, 0, 0}));
  IVec n = residual_counts(x);
  CHECK(n[1] == 0);
  PGAuxiliaries aux = sample_aux(x, Vec::Zero(2), rng);
  CHECK(aux.omega[1] == 0.0);
  Vec mu(2);
  mu << -0.4, 1.2;
  MVNParams post = condition_diag(mu, Mat::Identity(2, 2), evidence(x, aux));
  CHECK(post.mean[1] == doctest::Approx(mu[1]).epsilon(1e-10));
  CHECK(post.cov(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::fabs(post.cov(0, 1)) < 1e-12);
}

TEST_CASE("gibbs chain has the exact marginal (quadrature KS)") {
  // K=2, x=(1,0), prior N(0,1): alternate omega | psi and psi | omega
  oracles::ScalarPosteriorCdf cdf;
  CountVector x(make_ivec({1, 0}));
  Rng rng(77);
  double psi = 0.0;
  const int burn = 2000, keep = 100000, thin = 2;
  std::vector<double> kept;
  kept.reserve(keep);
  for (int i = 0; i < burn + keep * thin; ++i) {
    double omega = sample_pg({1.0, psi}, rng);
    double prec = 1.0 + omega;
    psi = 0.5 / prec + rng.normal() / std::sqrt(prec);
    if (i >= burn && (i - burn) % thin == 0) kept.push_back(psi);
  }
  CHECK(oracles::ks_statistic(kept, [&](double v) { return cdf(v); }) < 0.01);
}

TEST_CASE("geweke joint test for the augmentation chain") {
  // K=3, N=5, prior psi ~ N(0, I2); state = (psi, x)
  struct State {
    Vec psi;
    IVec x;
  };
  const int N = 5;
  auto forward = [&](Rng& rng) {
    State s;
    s.psi = Vec(2);
    s.psi << rng.normal(), rng.normal();
    s.x = rng.multinomial(N, pi_sb(s.psi));
    return s;
  };
  auto step = [&](State& s, Rng& rng, int) {
    CountVector cv(s.x);
    PGAuxiliaries aux = sample_aux(cv, s.psi, rng);
    MVNParams post =
        condition_diag(Vec::Zero(2), Mat::Identity(2, 2), evidence(cv, aux));
    s.psi = mvn_sample(post, rng);
    s.x = rng.multinomial(N, pi_sb(s.psi));
  };
  auto stats = [](const State& s) {
    Vec v(8);
    v << s.psi[0], s.psi[1], s.psi[0] * s.psi[0], s.psi[1] * s.psi[1],
        s.psi[0] * s.psi[1], s.x[0], s.x[1], s.x[0] * s.x[0];
    return v;
  };
  geweke::Result r = geweke::run<State>(forward, step, stats, 30000, 60000, 2,
                                        Rng(501), Rng(502));
  CHECK(r.max_abs_z() < 4.0);
}
