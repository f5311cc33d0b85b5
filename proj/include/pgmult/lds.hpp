#pragma once

#include <vector>

#include "pgmult/gaussian.hpp"

namespace pgmult {

// Linear dynamical system z_t = A z_{t-1} + N(0, B); observation potentials
// act on psi_t = C z_t. The first state carries the prior N(mu0, Sigma0).
struct LDSParams {
  Mat A;       // D x D
  Mat B;       // D x D, PD
  Mat C;       // (K-1) x D emission
  Vec mu0;     // D
  Mat Sigma0;  // D x D, PD
};

// Filtered moments kept in information form for the backward pass.
struct LDSFilterResult {
  std::vector<Vec> mean;       // filtered means m_t
  std::vector<Mat> precision;  // filtered precisions Lambda_t = P_t^-1
  std::vector<Mat> cov;        // filtered covariances P_t
  std::vector<Vec> pred_mean;  // one-step predictive means
  std::vector<Mat> pred_cov;   // one-step predictive covariances
};

// Forward filter with information-form evidence incorporation. The diagonal
// K-1 dimensional potential enters as C^T Omega C (an O(D^2 K) product), so
// no K x K matrix is ever formed and a sweep costs O(T D^3 + T D^2 K).
LDSFilterResult lds_filter(const LDSParams& params,
                           const std::vector<GaussianPotential>& potentials);

// Exact joint draw of z_{1:T} given the potentials (forward filtering,
// backward sampling). Returns a T x D matrix.
Mat lds_ffbs(const LDSParams& params,
             const std::vector<GaussianPotential>& potentials, Rng& rng);

// Marginal smoothed moments (RTS); deterministic, used by oracles.
struct SmoothedMoments {
  std::vector<Vec> mean;
  std::vector<Mat> cov;
};
SmoothedMoments lds_smoother(const LDSParams& params,
                             const std::vector<GaussianPotential>& potentials);

// Matrix-normal-inverse-Wishart prior for the dynamics pair (A, B):
// A | B ~ MN(M, B, V), B ~ IW(nu, Psi).
struct MNIWPrior {
  Mat M;
  Mat V;
  double nu = 0.0;
  Mat Psi;

  static MNIWPrior standard(int dim) {
    MNIWPrior p;
    p.M = Mat::Zero(dim, dim);
    p.V = Mat::Identity(dim, dim);
    p.nu = dim + 2.0;
    p.Psi = Mat::Identity(dim, dim);
    return p;
  }
};

struct LDSParamPriors {
  MNIWPrior dynamics;
  double c_row_precision = 1.0;  // iid N(0, 1/prec I) prior rows of C
};

// Conjugate draw of (A, B) from state pairs and of C row-wise from the
// pseudo-observations carried by the potentials (Bayesian linear regression
// with known noise diag(omega_t)). mu0 / Sigma0 pass through unchanged.
LDSParams lds_param_posterior_sample(const Eigen::Ref<const Mat>& states,
                                     const std::vector<GaussianPotential>& potentials,
                                     const LDSParams& current,
                                     const LDSParamPriors& priors, Rng& rng);

}  // namespace pgmult
