#pragma once

#include <utility>

#include "pgmult/rng.hpp"
#include "pgmult/types.hpp"

namespace pgmult {

// Multinomial observation together with its total count.
struct CountVector {
  IVec x;
  long total = 0;

  CountVector() = default;
  explicit CountVector(IVec counts);
};

double sigmoid(double x);
double logit(double p);
double log_sigmoid(double x);

// Inputs with |psi_k| beyond this are treated as saturated; keeps exp() in
// range while leaving round trips on [-10, 10] untouched.
constexpr double kPsiClamp = 500.0;

// Stick-breaking logistic map from R^{K-1} to the K-simplex: the k-th
// coordinate takes fraction sigmoid(psi_k) of the remaining stick, the last
// coordinate is the leftover.
Vec pi_sb(const Eigen::Ref<const Vec>& psi);

// Inverse map; requires a strictly interior simplex point. Remaining-stick
// mass is computed by suffix sums so saturated coordinates invert precisely.
Vec pi_sb_inv(const Eigen::Ref<const Vec>& pi);

// N_k = N - sum_{j<k} x_j, the trials remaining at each stick-breaking stage.
IVec residual_counts(const CountVector& x);

// kappa_k = x_k - N_k / 2, the linear term of the PG-augmented likelihood.
Vec kappa(const CountVector& x);

// Multinomial log pmf written as the product of K-1 binomials with
// probabilities sigmoid(psi_k); equals the classic pmf at pi_sb(psi),
// binomial coefficients included.
double log_multinomial_sb(const CountVector& x, const Eigen::Ref<const Vec>& psi);

// log |d pi / d psi| at psi, and log |d psi / d pi| at pi. The two cancel at
// matched points.
double forward_log_jacobian(const Eigen::Ref<const Vec>& psi);
double inverse_log_jacobian(const Eigen::Ref<const Vec>& pi);

// Density on the simplex implied by psi ~ N(mu, Sigma) pushed through pi_sb.
double log_density_pi_given_gaussian(const Eigen::Ref<const Vec>& pi,
                                     const Eigen::Ref<const Vec>& mu,
                                     const Eigen::Ref<const Mat>& Sigma);

// Density on psi implied by pi_sb(psi) ~ Dirichlet(alpha); factorizes over
// coordinates as transformed betas.
double log_density_psi_given_dirichlet(const Eigen::Ref<const Vec>& psi,
                                       const Eigen::Ref<const Vec>& alpha);

// Monte Carlo mean and variance of psi = pi_sb_inv(pi), pi ~ Dirichlet(alpha);
// used to set a diagonal Gaussian that approximates the Dirichlet.
std::pair<Vec, Vec> moment_match_dirichlet(const Eigen::Ref<const Vec>& alpha,
                                           int n_mc, Rng& rng);

}  // namespace pgmult
