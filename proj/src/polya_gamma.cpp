#include "pgmult/polya_gamma.hpp"

#include <cmath>

#include "pgmult/numerics.hpp"

namespace pgmult {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTrunc = 0.64;  // split point of the J*(1, z) proposal
constexpr double kTruncRecip = 1.0 / kTrunc;

// Piecewise coefficients a_n(x) of the alternating series for the J*(1, z)
// density (Polson, Scott & Windle 2013, eqs. 12-13).
double series_coef(int n, double x) {
  double K = (n + 0.5) * kPi;
  if (x > kTrunc) return K * std::exp(-0.5 * K * K * x);
  if (x > 0.0) {
    double expnt = -1.5 * (std::log(0.5 * kPi) + std::log(x)) + std::log(K) -
                   2.0 * (n + 0.5) * (n + 0.5) / x;
    return std::exp(expnt);
  }
  return 0.0;
}

// Probability that the two-piece proposal takes the truncated-exponential
// branch rather than the truncated inverse-Gaussian branch.
double mass_texpon(double z) {
  const double t = kTrunc;
  double fz = 0.125 * kPi * kPi + 0.5 * z * z;
  double b = std::sqrt(1.0 / t) * (t * z - 1.0);
  double a = -std::sqrt(1.0 / t) * (t * z + 1.0);

  double x0 = std::log(fz) + fz * t;
  double xb = x0 - z + log_norm_cdf(b);
  double xa = x0 + z + log_norm_cdf(a);

  double qdivp = 4.0 / kPi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + qdivp);
}

// Inverse-Gaussian(1/z, 1) truncated to (0, kTrunc).
double rtigauss(double z, Rng& rng) {
  z = std::fabs(z);
  const double t = kTrunc;
  double x = t + 1.0;
  if (kTruncRecip > z) {  // mu = 1/z > t: rejection from scaled exponentials
    double alpha = 0.0;
    do {
      double e1 = rng.expon();
      double e2 = rng.expon();
      while (e1 * e1 > 2.0 * e2 / t) {
        e1 = rng.expon();
        e2 = rng.expon();
      }
      x = 1.0 + e1 * t;
      x = t / (x * x);
      alpha = std::exp(-0.5 * z * z * x);
    } while (rng.unif() > alpha);
  } else {
    double mu = 1.0 / z;
    while (x > t) {
      double y = rng.normal();
      y *= y;
      double mu_y = mu * y;
      x = mu + 0.5 * mu * mu_y - 0.5 * mu * std::sqrt(4.0 * mu_y + mu_y * mu_y);
      if (rng.unif() > mu / (mu + x)) x = mu * mu / x;
    }
  }
  return x;
}

}  // namespace

namespace detail {

double draw_pg1(double c, Rng& rng) {
  // PG(1, c) = J*(1, c/2) / 4
  double z = 0.5 * std::fabs(c);
  double fz = 0.125 * kPi * kPi + 0.5 * z * z;

  for (;;) {
    double x;
    if (rng.unif() < mass_texpon(z))
      x = kTrunc + rng.expon() / fz;
    else
      x = rtigauss(z, rng);

    double s = series_coef(0, x);
    double y = rng.unif() * s;
    int n = 0;
    for (;;) {
      ++n;
      if (n % 2 == 1) {
        s -= series_coef(n, x);
        if (y <= s) return 0.25 * x;
      } else {
        s += series_coef(n, x);
        if (y > s) break;
      }
    }
  }
}

// PG(b, c) equals (1 / 2 pi^2) sum_k g_k / d_k with g_k ~ Gamma(b, 1) and
// d_k = (k - 1/2)^2 + (c / 2 pi)^2. Tail moments past `kept` terms are summed
// explicitly for 64 terms and closed with a midpoint-rule integral remainder.
void pg_tail_moments(double b, double c, int kept, double* mean, double* var) {
  const double a = std::fabs(c) / (2.0 * kPi);
  const double a2 = a * a;
  double s1 = 0.0, s2 = 0.0;
  const int explicit_terms = 64;
  for (int k = kept + 1; k <= kept + explicit_terms; ++k) {
    double d = (k - 0.5) * (k - 0.5) + a2;
    s1 += 1.0 / d;
    s2 += 1.0 / (d * d);
  }
  const double x0 = kept + explicit_terms;
  double r1, r2;
  if (a > 1e-6) {
    double at = kPi / 2.0 - std::atan(x0 / a);
    r1 = at / a;
    r2 = at / (2.0 * a2 * a) - x0 / (2.0 * a2 * (x0 * x0 + a2));
  } else {
    r1 = 1.0 / x0;
    r2 = 1.0 / (3.0 * x0 * x0 * x0);
  }
  double d0 = x0 * x0 + a2;
  r1 += (-2.0 * x0 / (d0 * d0)) / 24.0;          // midpoint correction h'(x0)/24
  r2 += (-4.0 * x0 / (d0 * d0 * d0)) / 24.0;
  s1 += r1;
  s2 += r2;

  const double c1 = 1.0 / (2.0 * kPi * kPi);
  *mean = b * c1 * s1;
  *var = b * c1 * c1 * s2;
}

}  // namespace detail

double sample_pg(const PGParams& params, Rng& rng) {
  const double b = params.b;
  const double c = params.c;
  if (!(b >= 0.0) || !std::isfinite(b) || !std::isfinite(c))
    throw ParameterError("sample_pg: b must be a finite nonnegative value and c finite");
  if (b == 0.0) return 0.0;
  double nr = std::round(b);
  if (std::fabs(b - nr) > 1e-9)
    throw ParameterError("sample_pg: non-integer shape b is not supported");
  long n = static_cast<long>(nr);

  if (n <= 20) {
    double sum = 0.0;
    for (long i = 0; i < n; ++i) sum += detail::draw_pg1(c, rng);
    return sum;
  }

  // truncated sum-of-gammas with a moment-matched gamma tail
  const int kept = 40;
  const double a = std::fabs(c) / (2.0 * kPi);
  const double a2 = a * a;
  double x = 0.0;
  for (int k = 1; k <= kept; ++k) {
    double d = (k - 0.5) * (k - 0.5) + a2;
    x += rng.gamma(b) / d;
  }
  x /= 2.0 * kPi * kPi;

  double tail_mean, tail_var;
  detail::pg_tail_moments(b, c, kept, &tail_mean, &tail_var);
  if (tail_mean > 0.0 && tail_var > 0.0) {
    double shape = tail_mean * tail_mean / tail_var;
    double scale = tail_var / tail_mean;
    x += rng.gamma(shape, scale);
  }
  return x;
}

double pg_mean(const PGParams& params) {
  const double b = params.b;
  const double c = params.c;
  if (!(b >= 0.0) || !std::isfinite(b) || !std::isfinite(c))
    throw ParameterError("pg_mean: b must be a finite nonnegative value and c finite");
  if (b == 0.0) return 0.0;
  if (std::fabs(c) < 1e-4) return b * (0.25 - c * c / 48.0);
  return b * std::tanh(0.5 * c) / (2.0 * c);
}

}  // namespace pgmult
