#include "pgmult/stick_breaking.hpp"

#include <algorithm>
#include <cmath>

#include "pgmult/numerics.hpp"

namespace pgmult {

CountVector::CountVector(IVec counts) : x(std::move(counts)) {
  long n = 0;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw ParameterError("CountVector: negative count");
    n += x[i];
  }
  total = n;
}

double sigmoid(double x) {
  x = std::clamp(x, -kPsiClamp, kPsiClamp);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0) || !(p < 1.0)) throw BoundaryError("logit: argument outside (0,1)");
  return std::log(p) - std::log1p(-p);
}

double log_sigmoid(double x) {
  x = std::clamp(x, -kPsiClamp, kPsiClamp);
  if (x > 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

Vec pi_sb(const Eigen::Ref<const Vec>& psi) {
  if (!psi.allFinite()) throw ParameterError("pi_sb: psi must be finite");
  const int K = static_cast<int>(psi.size()) + 1;
  Vec pi(K);
  double stick = 1.0;
  for (int k = 0; k < K - 1; ++k) {
    double frac = sigmoid(psi[k]);
    pi[k] = stick * frac;
    stick -= pi[k];
    if (stick < 0.0) stick = 0.0;
  }
  pi[K - 1] = stick;
  return pi;
}

Vec pi_sb_inv(const Eigen::Ref<const Vec>& pi) {
  const int K = static_cast<int>(pi.size());
  if (K < 1) throw ParameterError("pi_sb_inv: empty simplex point");
  for (int k = 0; k < K; ++k) {
    if (!(pi[k] > 0.0) || !std::isfinite(pi[k]))
      throw BoundaryError("pi_sb_inv: simplex coordinate not strictly positive");
  }
  // suffix[k] = sum_{j >= k} pi_j; suffix sums avoid the cancellation that
  // 1 - cumsum suffers near saturation
  Vec suffix(K + 1);
  suffix[K] = 0.0;
  for (int k = K - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + pi[k];
  if (std::fabs(suffix[0] - 1.0) > 1e-6)
    throw ParameterError("pi_sb_inv: coordinates do not sum to 1");

  Vec psi(K - 1);
  for (int k = 0; k < K - 1; ++k) {
    double remain = suffix[k + 1];
    if (!(remain > 0.0) || remain < 1e-300)
      throw BoundaryError("pi_sb_inv: remaining stick underflow");
    psi[k] = std::log(pi[k]) - std::log(remain);
  }
  return psi;
}

IVec residual_counts(const CountVector& x) {
  const int K = static_cast<int>(x.x.size());
  IVec n(std::max(K - 1, 0));
  long remain = x.total;
  for (int k = 0; k < K - 1; ++k) {
    n[k] = static_cast<int>(remain);
    remain -= x.x[k];
  }
  return n;
}

Vec kappa(const CountVector& x) {
  IVec n = residual_counts(x);
  Vec out(n.size());
  for (int k = 0; k < n.size(); ++k) out[k] = x.x[k] - 0.5 * n[k];
  return out;
}

double log_multinomial_sb(const CountVector& x, const Eigen::Ref<const Vec>& psi) {
  const int K = static_cast<int>(x.x.size());
  if (psi.size() != K - 1)
    throw ParameterError("log_multinomial_sb: psi must have length K-1");
  IVec n = residual_counts(x);
  double ll = 0.0;
  for (int k = 0; k < K - 1; ++k) {
    if (n[k] == 0) continue;
    ll += lchoose(n[k], x.x[k]);
    ll += x.x[k] * log_sigmoid(psi[k]);
    ll += (n[k] - x.x[k]) * log_sigmoid(-psi[k]);
  }
  return ll;
}

double forward_log_jacobian(const Eigen::Ref<const Vec>& psi) {
  double cum_neg = 0.0;
  double lj = 0.0;
  for (int k = 0; k < psi.size(); ++k) {
    cum_neg += log_sigmoid(-psi[k]);
    lj += log_sigmoid(psi[k]) + cum_neg;
  }
  return lj;
}

double inverse_log_jacobian(const Eigen::Ref<const Vec>& pi) {
  const int K = static_cast<int>(pi.size());
  for (int k = 0; k < K; ++k)
    if (!(pi[k] > 0.0)) throw BoundaryError("inverse_log_jacobian: boundary point");
  Vec suffix(K + 1);
  suffix[K] = 0.0;
  for (int k = K - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + pi[k];
  double lj = 0.0;
  for (int k = 0; k < K - 1; ++k)
    lj += std::log(suffix[k]) - std::log(pi[k]) - std::log(suffix[k + 1]);
  return lj;
}

// declared in gaussian.hpp; forward here to avoid the include cycle
double log_mvn_pdf(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& mu,
                   const Eigen::Ref<const Mat>& Sigma);

double log_density_pi_given_gaussian(const Eigen::Ref<const Vec>& pi,
                                     const Eigen::Ref<const Vec>& mu,
                                     const Eigen::Ref<const Mat>& Sigma) {
  Vec psi = pi_sb_inv(pi);
  return log_mvn_pdf(psi, mu, Sigma) + inverse_log_jacobian(pi);
}

double log_density_psi_given_dirichlet(const Eigen::Ref<const Vec>& psi,
                                       const Eigen::Ref<const Vec>& alpha) {
  const int K = static_cast<int>(alpha.size());
  if (psi.size() != K - 1)
    throw ParameterError("log_density_psi_given_dirichlet: dimension mismatch");
  for (int k = 0; k < K; ++k)
    if (!(alpha[k] > 0.0))
      throw ParameterError("log_density_psi_given_dirichlet: alpha must be positive");
  double tail = 0.0;  // sum_{j > k} alpha_j
  Vec tail_after(K);
  for (int k = K - 1; k >= 0; --k) {
    tail_after[k] = tail;
    tail += alpha[k];
  }
  double ld = -log_beta_fn(alpha);
  for (int k = 0; k < K - 1; ++k)
    ld += alpha[k] * log_sigmoid(psi[k]) + tail_after[k] * log_sigmoid(-psi[k]);
  return ld;
}

std::pair<Vec, Vec> moment_match_dirichlet(const Eigen::Ref<const Vec>& alpha,
                                           int n_mc, Rng& rng) {
  const int K = static_cast<int>(alpha.size());
  for (int k = 0; k < K; ++k)
    if (!(alpha[k] > 0.0))
      throw ParameterError("moment_match_dirichlet: alpha must be positive");
  if (n_mc < 1) throw ParameterError("moment_match_dirichlet: n_mc must be positive");

  Vec mean = Vec::Zero(K - 1);
  Vec m2 = Vec::Zero(K - 1);
  long n = 0;
  while (n < n_mc) {
    Vec pi = rng.dirichlet(alpha);
    if (pi.minCoeff() <= 1e-300) continue;  // redraw on gamma underflow
    Vec psi = pi_sb_inv(pi);
    ++n;
    for (int k = 0; k < K - 1; ++k) {
      double delta = psi[k] - mean[k];
      mean[k] += delta / n;
      m2[k] += delta * (psi[k] - mean[k]);
    }
  }
  Vec var = n > 1 ? Vec(m2 / (n - 1.0)) : Vec(Vec::Zero(K - 1));
  return {mean, var};
}

}  // namespace pgmult
