#include "pgmult/gaussian.hpp"

#include <cmath>
#include <string>

namespace pgmult {

Eigen::LLT<Mat> chol_jittered(Mat S, const char* ctx) {
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::LLT<Mat> llt(S);
  if (llt.info() == Eigen::Success) return llt;

  double scale = S.diagonal().mean();
  if (!(scale > 0.0)) scale = 1.0;
  double added = 0.0;
  for (double rel = 1e-8; rel <= 1e-4 * 1.0000001; rel *= 10.0) {
    double target = rel * scale;
    S.diagonal().array() += target - added;
    added = target;
    llt.compute(S);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw LinAlgError(std::string(ctx) + ": Cholesky failed after jitter escalation");
}

Vec mvn_sample(const MVNParams& p, Rng& rng) {
  if (p.mean.size() == 0) return Vec(0);
  Eigen::LLT<Mat> llt = chol_jittered(p.cov, "mvn_sample");
  Vec z(p.mean.size());
  for (int i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return p.mean + llt.matrixL() * z;
}

double log_mvn_pdf(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& mu,
                   const Eigen::Ref<const Mat>& Sigma) {
  const int d = static_cast<int>(x.size());
  if (d == 0) return 0.0;
  Mat S = 0.5 * (Sigma + Sigma.transpose());
  Eigen::LLT<Mat> llt(S);
  if (llt.info() != Eigen::Success)
    throw LinAlgError("log_mvn_pdf: covariance not positive definite");
  Vec diff = x - mu;
  Vec half = llt.matrixL().solve(diff);
  double logdet = 0.0;
  for (int i = 0; i < d; ++i) logdet += std::log(llt.matrixL()(i, i));
  return -0.5 * half.squaredNorm() - logdet - 0.5 * d * std::log(2.0 * M_PI);
}

MVNParams condition_diag(const Eigen::Ref<const Vec>& mu,
                         const Eigen::Ref<const Mat>& Sigma,
                         const GaussianPotential& pot) {
  const int d = static_cast<int>(mu.size());
  if (pot.precision_diag.size() != d || pot.linear.size() != d)
    throw ParameterError("condition_diag: potential dimension mismatch");
  if (d == 0) return {Vec(0), Mat(0, 0)};
  Eigen::LLT<Mat> prior = chol_jittered(Sigma, "condition_diag(prior)");
  Mat lambda = prior.solve(Mat::Identity(d, d));
  Vec h = prior.solve(mu) + pot.linear;
  lambda.diagonal() += pot.precision_diag;
  Eigen::LLT<Mat> post = chol_jittered(lambda, "condition_diag(posterior)");
  Mat cov = post.solve(Mat::Identity(d, d));
  Vec mean = post.solve(h);
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {mean, cov};
}

Mat wishart_sample(double df, const Eigen::Ref<const Mat>& scale, Rng& rng) {
  const int d = static_cast<int>(scale.rows());
  if (!(df > d - 1))
    throw ParameterError("wishart_sample: df must exceed dim - 1");
  Eigen::LLT<Mat> llt = chol_jittered(scale, "wishart_sample");
  Mat bart = Mat::Zero(d, d);  // Bartlett factor
  for (int i = 0; i < d; ++i) {
    bart(i, i) = std::sqrt(rng.chi_squared(df - i));
    for (int j = 0; j < i; ++j) bart(i, j) = rng.normal();
  }
  Mat m = llt.matrixL() * bart;
  return m * m.transpose();
}

Mat inverse_wishart_sample(double df, const Eigen::Ref<const Mat>& psi, Rng& rng) {
  const int d = static_cast<int>(psi.rows());
  Eigen::LLT<Mat> llt = chol_jittered(psi, "inverse_wishart_sample");
  Mat psi_inv = llt.solve(Mat::Identity(d, d));
  Mat w = wishart_sample(df, psi_inv, rng);
  Eigen::LLT<Mat> wllt = chol_jittered(w, "inverse_wishart_sample(invert)");
  Mat out = wllt.solve(Mat::Identity(d, d));
  return 0.5 * (out + out.transpose());
}

Mat matrix_normal_sample(const Eigen::Ref<const Mat>& M,
                         const Eigen::Ref<const Mat>& U,
                         const Eigen::Ref<const Mat>& V, Rng& rng) {
  Eigen::LLT<Mat> lu = chol_jittered(U, "matrix_normal_sample(U)");
  Eigen::LLT<Mat> lv = chol_jittered(V, "matrix_normal_sample(V)");
  Mat g(M.rows(), M.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  return M + Mat(lu.matrixL()) * g * Mat(lv.matrixL()).transpose();
}

NIWParams niw_posterior_params(const NIWParams& prior, double n,
                               const Eigen::Ref<const Vec>& sum_x,
                               const Eigen::Ref<const Mat>& sum_xxt) {
  const int d = static_cast<int>(prior.mean0.size());
  if (!(prior.kappa0 > 0.0) || !(prior.nu0 > d - 1))
    throw ParameterError("niw: kappa0 must be positive and nu0 > dim - 1");
  NIWParams post;
  post.kappa0 = prior.kappa0 + n;
  post.nu0 = prior.nu0 + n;
  post.mean0 = (prior.kappa0 * prior.mean0 + sum_x) / post.kappa0;
  // psi_n = psi0 + sum xx^T + k0 m0 m0^T - k_n m_n m_n^T
  post.psi0 = prior.psi0 + sum_xxt +
              prior.kappa0 * prior.mean0 * prior.mean0.transpose() -
              post.kappa0 * post.mean0 * post.mean0.transpose();
  post.psi0 = 0.5 * (post.psi0 + post.psi0.transpose()).eval();
  return post;
}

MVNParams niw_sample(const NIWParams& post, Rng& rng) {
  Mat sigma = inverse_wishart_sample(post.nu0, post.psi0, rng);
  MVNParams mu_draw{post.mean0, sigma / post.kappa0};
  Vec mu = mvn_sample(mu_draw, rng);
  return {mu, sigma};
}

MVNParams niw_posterior_sample(const NIWParams& prior, const std::vector<Vec>& data,
                               Rng& rng) {
  const int d = static_cast<int>(prior.mean0.size());
  Vec sum_x = Vec::Zero(d);
  Mat sum_xxt = Mat::Zero(d, d);
  for (const Vec& v : data) {
    sum_x += v;
    sum_xxt += v * v.transpose();
  }
  NIWParams post = niw_posterior_params(prior, static_cast<double>(data.size()),
                                        sum_x, sum_xxt);
  return niw_sample(post, rng);
}

}  // namespace pgmult
