#pragma once

#include "pgmult/gaussian.hpp"

namespace pgmult {

// Squared-exponential kernel with per-dimension lengthscales. Hyperparameters
// are fixed by configuration; they are not inferred.
struct SquaredExpKernel {
  double variance = 1.0;
  Vec lengthscales;

  double operator()(const Eigen::Ref<const Vec>& a,
                    const Eigen::Ref<const Vec>& b) const;
};

// GP prior over one latent output: kernel shared across outputs, rows of
// `inputs` are the M training locations, output_means[k] is the constant
// prior mean for output k.
struct GPSpec {
  SquaredExpKernel kernel;
  Mat inputs;        // M x D
  Vec output_means;  // K-1 constants

  Mat gram() const;
  Mat gram_cross(const Eigen::Ref<const Mat>& other) const;  // M x M_other
  Mat gram_at(const Eigen::Ref<const Mat>& pts) const;
};

// Exact conditional of the latent function values at the training inputs
// given diagonal evidence: covariance (C^-1 + Omega)^-1, mean
// cov * (C^-1 mu + kappa).
MVNParams gp_conditional(const Eigen::Ref<const Mat>& gram,
                         const Eigen::Ref<const Vec>& mean,
                         const GaussianPotential& pot);
MVNParams gp_conditional(const GPSpec& spec, int output_k,
                         const GaussianPotential& pot);

// Marginal (collapsed) prediction at test inputs: condition the joint
// (train, test) GP on the diagonal evidence at the training inputs and
// integrate the training values out analytically. No conditioning on a point
// value of the training function.
MVNParams gp_predict_marginal(const Eigen::Ref<const Mat>& gram_train,
                              const Eigen::Ref<const Mat>& cross_train_test,
                              const Eigen::Ref<const Mat>& gram_test,
                              const Eigen::Ref<const Vec>& mean_train,
                              const Eigen::Ref<const Vec>& mean_test,
                              const GaussianPotential& train_pot);
MVNParams gp_predict_marginal(const GPSpec& spec, int output_k,
                              const GaussianPotential& train_pot,
                              const Eigen::Ref<const Mat>& test_inputs);

}  // namespace pgmult
