#include "pgmult/gp.hpp"

#include <cmath>

namespace pgmult {

double SquaredExpKernel::operator()(const Eigen::Ref<const Vec>& a,
                                    const Eigen::Ref<const Vec>& b) const {
  if (lengthscales.size() != a.size() || a.size() != b.size())
    throw ParameterError("SquaredExpKernel: dimension mismatch");
  double q = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    if (!(lengthscales[i] > 0.0))
      throw ParameterError("SquaredExpKernel: lengthscales must be positive");
    double d = (a[i] - b[i]) / lengthscales[i];
    q += d * d;
  }
  return variance * std::exp(-0.5 * q);
}

Mat GPSpec::gram() const { return gram_at(inputs); }

Mat GPSpec::gram_at(const Eigen::Ref<const Mat>& pts) const {
  const int m = static_cast<int>(pts.rows());
  Mat g(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = kernel(pts.row(i), pts.row(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

Mat GPSpec::gram_cross(const Eigen::Ref<const Mat>& other) const {
  Mat g(inputs.rows(), other.rows());
  for (int i = 0; i < inputs.rows(); ++i)
    for (int j = 0; j < other.rows(); ++j)
      g(i, j) = kernel(inputs.row(i), other.row(j));
  return g;
}

MVNParams gp_conditional(const Eigen::Ref<const Mat>& gram,
                         const Eigen::Ref<const Vec>& mean,
                         const GaussianPotential& pot) {
  return condition_diag(mean, gram, pot);
}

MVNParams gp_conditional(const GPSpec& spec, int output_k,
                         const GaussianPotential& pot) {
  Vec mean = Vec::Constant(spec.inputs.rows(), spec.output_means[output_k]);
  return gp_conditional(spec.gram(), mean, pot);
}

MVNParams gp_predict_marginal(const Eigen::Ref<const Mat>& gram_train,
                              const Eigen::Ref<const Mat>& cross_train_test,
                              const Eigen::Ref<const Mat>& gram_test,
                              const Eigen::Ref<const Vec>& mean_train,
                              const Eigen::Ref<const Vec>& mean_test,
                              const GaussianPotential& train_pot) {
  MVNParams train_post = condition_diag(mean_train, gram_train, train_pot);
  Eigen::LLT<Mat> llt = chol_jittered(gram_train, "gp_predict_marginal");
  // A = C_test,train C_train^-1
  Mat a = llt.solve(cross_train_test).transpose();
  Vec mean = mean_test + a * (train_post.mean - mean_train);
  Mat cov = gram_test - a * cross_train_test +
            a * train_post.cov * a.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {mean, cov};
}

MVNParams gp_predict_marginal(const GPSpec& spec, int output_k,
                              const GaussianPotential& train_pot,
                              const Eigen::Ref<const Mat>& test_inputs) {
  Vec mean_train = Vec::Constant(spec.inputs.rows(), spec.output_means[output_k]);
  Vec mean_test = Vec::Constant(test_inputs.rows(), spec.output_means[output_k]);
  return gp_predict_marginal(spec.gram(), spec.gram_cross(test_inputs),
                             spec.gram_at(test_inputs), mean_train, mean_test,
                             train_pot);
}

}  // namespace pgmult
