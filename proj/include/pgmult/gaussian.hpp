#pragma once

#include <vector>

#include "pgmult/augmentation_types.hpp"
#include "pgmult/rng.hpp"
#include "pgmult/types.hpp"

namespace pgmult {

struct MVNParams {
  Vec mean;
  Mat cov;
};

// Normal-inverse-Wishart hyperparameters for (mu, Sigma).
struct NIWParams {
  Vec mean0;
  double kappa0 = 1.0;
  double nu0 = 0.0;  // must exceed dim - 1
  Mat psi0;

  static NIWParams standard(int dim) {
    NIWParams p;
    p.mean0 = Vec::Zero(dim);
    p.kappa0 = 1.0;
    p.nu0 = dim + 2.0;
    p.psi0 = Mat::Identity(dim, dim);
    return p;
  }
};

// Cholesky with the escalating-jitter policy: on failure add
// 1e-8 * mean(diag) to the diagonal, escalate by 10x up to 1e-4 * mean(diag),
// then raise LinAlgError naming `ctx`.
Eigen::LLT<Mat> chol_jittered(Mat S, const char* ctx);

Vec mvn_sample(const MVNParams& p, Rng& rng);

double log_mvn_pdf(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& mu,
                   const Eigen::Ref<const Mat>& Sigma);

// Combine a Gaussian prior N(mu, Sigma) with a diagonal evidence potential in
// information form: posterior precision Sigma^-1 + diag(prec), linear term
// Sigma^-1 mu + lin. Zero-precision coordinates contribute nothing.
MVNParams condition_diag(const Eigen::Ref<const Vec>& mu,
                         const Eigen::Ref<const Mat>& Sigma,
                         const GaussianPotential& pot);

Mat wishart_sample(double df, const Eigen::Ref<const Mat>& scale, Rng& rng);
Mat inverse_wishart_sample(double df, const Eigen::Ref<const Mat>& psi, Rng& rng);

// Draw from MN(M, U, V): M + chol(U) G chol(V)^T with G iid standard normal.
Mat matrix_normal_sample(const Eigen::Ref<const Mat>& M,
                         const Eigen::Ref<const Mat>& U,
                         const Eigen::Ref<const Mat>& V, Rng& rng);

// Conjugate NIW posterior given data vectors (empty data draws from the
// prior); returns a sampled (mu, Sigma).
MVNParams niw_posterior_sample(const NIWParams& prior, const std::vector<Vec>& data,
                               Rng& rng);

// Same update expressed through sufficient statistics (n, sum x, sum x x^T);
// used by SVI where the statistics are expectations.
NIWParams niw_posterior_params(const NIWParams& prior, double n,
                               const Eigen::Ref<const Vec>& sum_x,
                               const Eigen::Ref<const Mat>& sum_xxt);
MVNParams niw_sample(const NIWParams& post, Rng& rng);

}  // namespace pgmult
