#pragma once

#include <utility>
#include <vector>

#include "pgmult/types.hpp"

namespace pgmult {

double lchoose(double n, double k);

// log of the multivariate beta function, sum(lgamma(a)) - lgamma(sum(a)).
double log_beta_fn(const Eigen::Ref<const Vec>& alpha);

double logsumexp(const std::vector<double>& xs);

// Standard normal CDF and its log, stable deep in the left tail.
double norm_cdf(double x);
double log_norm_cdf(double x);

// Gauss-Hermite nodes/weights for integrals against exp(-x^2)/sqrt(pi) --
// i.e. E[f(Z)] for Z ~ N(0, 1/2); callers rescale as needed.
std::pair<Vec, Vec> gauss_hermite(int n);

// Gauss-Legendre nodes/weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int n);

}  // namespace pgmult
