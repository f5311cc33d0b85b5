#pragma once

#include "pgmult/rng.hpp"
#include "pgmult/types.hpp"

namespace pgmult {

// Parameters of PG(b, c): b is the shape (a nonnegative integer at every
// sampling call site in this library), c the exponential-tilt parameter.
// The distribution is symmetric in c.
struct PGParams {
  double b = 1.0;
  double c = 0.0;
};

// Draw from PG(b, c). Sampler tiers:
//   b == 0          point mass at zero
//   b == 1          exact alternating-series rejection sampler (Devroye-style,
//                   following Polson/Scott/Windle)
//   integer b <= 20 sum of b independent PG(1, c) draws
//   integer b > 20  truncated sum-of-gammas representation with a gamma tail
//                   moment-matched to the numerically computed tail mean and
//                   variance of the tilted series
// Throws ParameterError for negative or non-integer b, or non-finite c.
double sample_pg(const PGParams& params, Rng& rng);

// Closed-form mean (b / 2c) * tanh(c / 2); quadratic Taylor expansion below
// |c| = 1e-4 so the c -> 0 limit b/4 is hit without cancellation.
double pg_mean(const PGParams& params);

namespace detail {
// Mean and variance of the series tail sum_{k > kept} g_k / d_k scaled as in
// the PG representation; exposed for tests.
void pg_tail_moments(double b, double c, int kept, double* mean, double* var);
double draw_pg1(double c, Rng& rng);
}  // namespace detail

}  // namespace pgmult
