#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pgmult/types.hpp"

namespace pgmult {

// splitmix64 finalizer, used to derive independent stream keys.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. Every parallel lane owns its own Rng derived
// from a root seed and a small tuple of indices (chain, sweep, lane), so
// results do not depend on thread scheduling. Variate algorithms are
// implemented here rather than taken from <random> distributions to keep the
// byte-level output independent of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed), gen_(mix64(seed)) {}

  static Rng keyed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                   std::uint64_t c = 0) {
    std::uint64_t k = mix64(seed ^ mix64(a ^ 0x633d5d86017a7b8bULL));
    k = mix64(k ^ mix64(b ^ 0x2545f4914f6cdd1dULL));
    k = mix64(k ^ mix64(c ^ 0x9e6c63d0a2886b4fULL));
    return Rng(k);
  }

  // Child stream identified by indices; independent of how much this stream
  // has been consumed.
  Rng fork(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return keyed(key_, a, b, c);
  }

  std::uint64_t bits() { return gen_(); }

  // Uniform on the open interval (0, 1).
  double unif() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
  }

  double normal() {
    double u1 = unif();
    double u2 = unif();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Exponential with rate 1.
  double expon() { return -std::log(unif()); }

  // Marsaglia-Tsang; shape < 1 handled by boosting.
  double gamma(double shape, double scale = 1.0) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw ParameterError("Rng::gamma: shape and scale must be positive");
    if (shape < 1.0) {
      double u = unif();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = unif();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v * scale;
    }
  }

  double chi_squared(double df) { return gamma(0.5 * df, 2.0); }

  double beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
  }

  // Inverse gamma with density proportional to x^{-shape-1} exp(-scale/x).
  double inv_gamma(double shape, double scale) {
    return scale / gamma(shape, 1.0);
  }

  // Index draw proportional to probs (need not be normalized).
  int categorical(const Eigen::Ref<const Vec>& probs) {
    double total = probs.sum();
    if (!(total > 0.0) || !std::isfinite(total))
      throw ParameterError("Rng::categorical: nonpositive weight total");
    double u = unif() * total;
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u <= acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
  }

  int bernoulli(double p) { return unif() < p ? 1 : 0; }

  int binomial(int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0)
      throw ParameterError("Rng::binomial: bad parameters");
    int k = 0;
    for (int i = 0; i < n; ++i) k += bernoulli(p);
    return k;
  }

  Vec dirichlet(const Eigen::Ref<const Vec>& alpha) {
    Vec g(alpha.size());
    for (int i = 0; i < alpha.size(); ++i) g[i] = gamma(alpha[i]);
    double s = g.sum();
    if (s <= 0.0) {
      // all-underflow corner for very small concentrations
      g.setConstant(1.0 / static_cast<double>(alpha.size()));
      return g;
    }
    return g / s;
  }

  IVec multinomial(int n, const Eigen::Ref<const Vec>& probs) {
    IVec counts = IVec::Zero(probs.size());
    for (int i = 0; i < n; ++i) counts[categorical(probs)] += 1;
    return counts;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::mt19937_64 gen_;
};

// Identity of one MCMC chain / run; sweep functions derive their per-lane
// streams from this.
struct RngKey {
  std::uint64_t seed = 0;
  std::uint64_t chain = 0;

  Rng lane(std::uint64_t sweep, std::uint64_t lane_idx) const {
    return Rng::keyed(seed ^ (chain * 0x51d0d7d9cbcd5a29ULL), sweep, lane_idx);
  }
};

}  // namespace pgmult
