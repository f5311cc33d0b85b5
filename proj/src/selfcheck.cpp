#include <cmath>
#include <functional>
#include <ostream>

#include "pgmult/augmentation.hpp"
#include "pgmult/gp.hpp"
#include "pgmult/lds.hpp"
#include "pgmult/polya_gamma.hpp"
#include "pgmult/runner.hpp"
#include "pgmult/stick_breaking.hpp"

namespace pgmult {

namespace {

bool report(std::ostream& out, const char* name, bool ok) {
  out << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
  return ok;
}

bool check_pg(std::ostream& out) {
  bool ok = std::fabs(pg_mean({1.0, 0.0}) - 0.25) < 1e-12;
  ok = ok && std::fabs(pg_mean({2.0, 3.0}) - std::tanh(1.5) / 3.0) < 1e-12;
  Rng rng(11);
  double acc = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) acc += sample_pg({1.0, 0.0}, rng);
  ok = ok && std::fabs(acc / n - 0.25) < 0.01;
  acc = 0.0;
  for (int i = 0; i < n; ++i) acc += sample_pg({3.0, 1.5}, rng);
  ok = ok && std::fabs(acc / n - pg_mean({3.0, 1.5})) < 0.02;
  return report(out, "polya-gamma means", ok);
}

bool check_stick(std::ostream& out) {
  Rng rng(7);
  bool ok = true;
  for (int rep = 0; rep < 20; ++rep) {
    int K = 2 + static_cast<int>(rng.bits() % 5);
    Vec psi(K - 1);
    for (int i = 0; i < K - 1; ++i) psi[i] = 20.0 * rng.unif() - 10.0;
    Vec pi = pi_sb(psi);
    ok = ok && std::fabs(pi.sum() - 1.0) < 1e-12 && pi.minCoeff() >= 0.0;
    ok = ok && (pi_sb_inv(pi) - psi).cwiseAbs().maxCoeff() < 1e-10;
  }
  // exact binomial decomposition against the classic pmf for small cases
  for (int K = 2; K <= 3 && ok; ++K) {
    Vec psi(K - 1);
    for (int i = 0; i < K - 1; ++i) psi[i] = 0.7 * (i + 1) - 1.0;
    Vec pi = pi_sb(psi);
    for (int total = 0; total <= 5 && ok; ++total) {
      std::vector<IVec> stack;
      IVec cur = IVec::Zero(K);
      std::function<void(int, int)> enumerate = [&](int pos, int left) {
        if (pos == K - 1) {
          cur[pos] = left;
          stack.push_back(cur);
          return;
        }
        for (int v = 0; v <= left; ++v) {
          cur[pos] = v;
          enumerate(pos + 1, left - v);
        }
      };
      enumerate(0, total);
      for (const IVec& x : stack) {
        double direct = std::lgamma(total + 1.0);
        for (int kk = 0; kk < K; ++kk) {
          direct -= std::lgamma(x[kk] + 1.0);
          direct += x[kk] * std::log(pi[kk]);
        }
        double via_sticks = log_multinomial_sb(CountVector(x), psi);
        ok = ok && std::fabs(direct - via_sticks) < 1e-10;
      }
    }
  }
  return report(out, "stick-breaking round trip and pmf decomposition", ok);
}

bool check_evidence(std::ostream& out) {
  IVec x(2);
  x << 1, 0;
  CountVector cv(x);
  GaussianPotential pot = evidence(cv, {Vec::Constant(1, 0.25)});
  MVNParams post = condition_diag(Vec::Zero(1), Mat::Identity(1, 1), pot);
  bool ok = std::fabs(post.mean[0] - 0.4) < 1e-12 &&
            std::fabs(post.cov(0, 0) - 0.8) < 1e-12;
  return report(out, "conjugate evidence update", ok);
}

bool check_gp(std::ostream& out) {
  Mat gram(3, 3);
  gram << 2.0, 0.5, 0.2, 0.5, 1.5, 0.4, 0.2, 0.4, 1.8;
  Vec mean(3);
  mean << 0.1, -0.2, 0.3;
  GaussianPotential pot{Vec(3), Vec(3)};
  pot.precision_diag << 0.7, 0.0, 2.0;
  pot.linear << 0.5, 0.0, -1.0;
  MVNParams got = gp_conditional(gram, mean, pot);
  Mat lambda = gram.inverse() + Mat(pot.precision_diag.asDiagonal());
  Mat cov = lambda.inverse();
  Vec mu = cov * (gram.inverse() * mean + pot.linear);
  bool ok = (got.mean - mu).cwiseAbs().maxCoeff() < 1e-8 &&
            (got.cov - cov).cwiseAbs().maxCoeff() < 1e-8;
  return report(out, "gp conditional vs dense formula", ok);
}

bool check_lds(std::ostream& out) {
  LDSParams p;
  p.A = Mat::Constant(1, 1, 0.8);
  p.B = Mat::Constant(1, 1, 0.3);
  p.C = Mat::Identity(1, 1);
  p.mu0 = Vec::Zero(1);
  p.Sigma0 = Mat::Identity(1, 1);
  std::vector<GaussianPotential> pots(3);
  for (int t = 0; t < 3; ++t)
    pots[t] = {Vec::Constant(1, 0.5 + 0.2 * t), Vec::Constant(1, 0.3 - 0.1 * t)};

  // dense joint over (z1, z2, z3)
  Mat prior_cov(3, 3);
  Vec prior_mean = Vec::Zero(3);
  double v1 = 1.0;
  double v2 = 0.8 * 0.8 * v1 + 0.3;
  double v3 = 0.8 * 0.8 * v2 + 0.3;
  prior_cov << v1, 0.8 * v1, 0.64 * v1, 0.8 * v1, v2, 0.8 * v2, 0.64 * v1,
      0.8 * v2, v3;
  Mat lambda = prior_cov.inverse();
  Vec h = lambda * prior_mean;
  for (int t = 0; t < 3; ++t) {
    lambda(t, t) += pots[t].precision_diag[0];
    h[t] += pots[t].linear[0];
  }
  Mat cov = lambda.inverse();
  Vec mean = cov * h;

  SmoothedMoments sm = lds_smoother(p, pots);
  bool ok = true;
  for (int t = 0; t < 3; ++t) {
    ok = ok && std::fabs(sm.mean[t][0] - mean[t]) < 1e-8;
    ok = ok && std::fabs(sm.cov[t](0, 0) - cov(t, t)) < 1e-8;
  }
  return report(out, "lds smoother vs dense joint conditioning", ok);
}

bool check_rng(std::ostream& out) {
  Rng a = Rng::keyed(42, 1, 2, 3);
  Rng b = Rng::keyed(42, 1, 2, 3);
  Rng c = Rng::keyed(42, 1, 2, 4);
  bool ok = true;
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t xa = a.bits();
    ok = ok && xa == b.bits();
    any_diff = any_diff || xa != c.bits();
  }
  return report(out, "keyed rng lanes deterministic and distinct", ok && any_diff);
}

}  // namespace

bool selfcheck(std::ostream& out) {
  bool ok = true;
  ok &= check_pg(out);
  ok &= check_stick(out);
  ok &= check_evidence(out);
  ok &= check_gp(out);
  ok &= check_lds(out);
  ok &= check_rng(out);
  out << (ok ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  return ok;
}

}  // namespace pgmult
