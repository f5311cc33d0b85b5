#include "pgmult/lds.hpp"

#include <cmath>
#include <string>

namespace pgmult {

namespace {

void check_params(const LDSParams& p, const std::vector<GaussianPotential>& pots) {
  const int d = static_cast<int>(p.A.rows());
  if (p.A.cols() != d || p.B.rows() != d || p.B.cols() != d ||
      p.Sigma0.rows() != d || p.Sigma0.cols() != d || p.mu0.size() != d ||
      p.C.cols() != d)
    throw ParameterError("lds: inconsistent parameter dimensions");
  for (const auto& pot : pots)
    if (pot.precision_diag.size() != p.C.rows() || pot.linear.size() != p.C.rows())
      throw ParameterError("lds: potential width must match emission rows");
}

}  // namespace

LDSFilterResult lds_filter(const LDSParams& params,
                           const std::vector<GaussianPotential>& potentials) {
  check_params(params, potentials);
  const int T = static_cast<int>(potentials.size());
  const int d = static_cast<int>(params.A.rows());
  LDSFilterResult out;
  out.mean.resize(T);
  out.precision.resize(T);
  out.cov.resize(T);
  out.pred_mean.resize(T);
  out.pred_cov.resize(T);

  Vec m = params.mu0;
  Mat p = params.Sigma0;
  for (int t = 0; t < T; ++t) {
    if (t > 0) {
      m = params.A * out.mean[t - 1];
      p = params.A * out.cov[t - 1] * params.A.transpose() + params.B;
    }
    out.pred_mean[t] = m;
    out.pred_cov[t] = p;

    Eigen::LLT<Mat> pred_llt;
    try {
      pred_llt = chol_jittered(p, "lds_filter(predict)");
    } catch (const LinAlgError& e) {
      throw LinAlgError(std::string(e.what()) + " at timestep " + std::to_string(t));
    }
    Mat lambda = pred_llt.solve(Mat::Identity(d, d));
    Vec h = pred_llt.solve(m);

    // C^T Omega C via a scaled-rows product: O(D^2 K), no K x K matrix
    const GaussianPotential& pot = potentials[t];
    if (params.C.rows() > 0) {
      Mat cw = pot.precision_diag.asDiagonal() * params.C;
      lambda.noalias() += params.C.transpose() * cw;
      h.noalias() += params.C.transpose() * pot.linear;
    }

    Eigen::LLT<Mat> post_llt;
    try {
      post_llt = chol_jittered(lambda, "lds_filter(update)");
    } catch (const LinAlgError& e) {
      throw LinAlgError(std::string(e.what()) + " at timestep " + std::to_string(t));
    }
    out.precision[t] = lambda;
    out.cov[t] = post_llt.solve(Mat::Identity(d, d));
    out.cov[t] = 0.5 * (out.cov[t] + out.cov[t].transpose()).eval();
    out.mean[t] = post_llt.solve(h);
    m = out.mean[t];
    p = out.cov[t];
  }
  return out;
}

Mat lds_ffbs(const LDSParams& params,
             const std::vector<GaussianPotential>& potentials, Rng& rng) {
  LDSFilterResult f = lds_filter(params, potentials);
  const int T = static_cast<int>(potentials.size());
  const int d = static_cast<int>(params.A.rows());
  Mat states(T, d);
  if (T == 0) return states;

  auto draw_info = [&](const Mat& lambda, const Vec& h) -> Vec {
    Eigen::LLT<Mat> llt = chol_jittered(lambda, "lds_ffbs(backward)");
    Vec mean = llt.solve(h);
    Vec z(d);
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    // x = mean + L^-T z has covariance Lambda^-1
    Vec perturb = llt.matrixU().solve(z);
    return mean + perturb;
  };

  states.row(T - 1) =
      draw_info(f.precision[T - 1], f.precision[T - 1] * f.mean[T - 1]);

  Eigen::LLT<Mat> b_llt = chol_jittered(params.B, "lds_ffbs(B)");
  Mat b_inv = b_llt.solve(Mat::Identity(d, d));
  Mat atbi = params.A.transpose() * b_inv;
  Mat atbia = atbi * params.A;

  for (int t = T - 2; t >= 0; --t) {
    Mat lambda = f.precision[t] + atbia;
    Vec h = f.precision[t] * f.mean[t] + atbi * states.row(t + 1).transpose();
    states.row(t) = draw_info(lambda, h);
  }
  return states;
}

SmoothedMoments lds_smoother(const LDSParams& params,
                             const std::vector<GaussianPotential>& potentials) {
  LDSFilterResult f = lds_filter(params, potentials);
  const int T = static_cast<int>(potentials.size());
  SmoothedMoments out;
  out.mean.resize(T);
  out.cov.resize(T);
  if (T == 0) return out;
  out.mean[T - 1] = f.mean[T - 1];
  out.cov[T - 1] = f.cov[T - 1];
  for (int t = T - 2; t >= 0; --t) {
    Eigen::LLT<Mat> llt = chol_jittered(f.pred_cov[t + 1], "lds_smoother");
    Mat g = (llt.solve(params.A * f.cov[t])).transpose();  // P_t A^T Ppred^-1
    out.mean[t] = f.mean[t] + g * (out.mean[t + 1] - f.pred_mean[t + 1]);
    out.cov[t] = f.cov[t] + g * (out.cov[t + 1] - f.pred_cov[t + 1]) * g.transpose();
    out.cov[t] = 0.5 * (out.cov[t] + out.cov[t].transpose()).eval();
  }
  return out;
}

LDSParams lds_param_posterior_sample(const Eigen::Ref<const Mat>& states,
                                     const std::vector<GaussianPotential>& potentials,
                                     const LDSParams& current,
                                     const LDSParamPriors& priors, Rng& rng) {
  const int T = static_cast<int>(states.rows());
  const int d = static_cast<int>(states.cols());
  if (T < 2) throw ParameterError("lds_param_posterior_sample: need at least 2 timesteps");
  LDSParams out = current;

  // (A, B): matrix-normal-inverse-Wishart regression of z_t on z_{t-1}
  {
    const MNIWPrior& pr = priors.dynamics;
    Mat x = states.topRows(T - 1);
    Mat y = states.bottomRows(T - 1);
    Eigen::LLT<Mat> v_llt = chol_jittered(pr.V, "lds_param(dynamics V)");
    Mat v_inv = v_llt.solve(Mat::Identity(d, d));
    Mat sxx = x.transpose() * x + v_inv;
    Mat sxy = x.transpose() * y + v_inv * pr.M.transpose();
    Mat syy = y.transpose() * y + pr.M * v_inv * pr.M.transpose();
    Eigen::LLT<Mat> sxx_llt = chol_jittered(sxx, "lds_param(dynamics)");
    Mat a_mean = sxx_llt.solve(sxy).transpose();
    Mat psi_n = pr.Psi + syy - a_mean * sxy;
    psi_n = 0.5 * (psi_n + psi_n.transpose()).eval();
    double nu_n = pr.nu + (T - 1);
    out.B = inverse_wishart_sample(nu_n, psi_n, rng);
    Mat sxx_inv = sxx_llt.solve(Mat::Identity(d, d));
    out.A = matrix_normal_sample(a_mean, out.B, sxx_inv, rng);
  }

  // C rows: Gaussian regression with known per-coordinate noise precisions
  {
    const int rows = static_cast<int>(current.C.rows());
    if (static_cast<int>(potentials.size()) != T)
      throw ParameterError("lds_param_posterior_sample: potentials length mismatch");
    Mat c_new(rows, d);
    for (int k = 0; k < rows; ++k) {
      Mat lambda = priors.c_row_precision * Mat::Identity(d, d);
      Vec h = Vec::Zero(d);
      for (int t = 0; t < T; ++t) {
        double w = potentials[t].precision_diag[k];
        if (w > 0.0)
          lambda.noalias() += w * states.row(t).transpose() * states.row(t);
        h.noalias() += potentials[t].linear[k] * states.row(t).transpose();
      }
      Eigen::LLT<Mat> llt = chol_jittered(lambda, "lds_param(emission)");
      Vec mean = llt.solve(h);
      Vec z(d);
      for (int i = 0; i < d; ++i) z[i] = rng.normal();
      c_new.row(k) = (mean + llt.matrixU().solve(z)).transpose();
    }
    out.C = c_new;
  }
  return out;
}

}  // namespace pgmult
