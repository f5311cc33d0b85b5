#include <cmath>

#include "pgmult/ctm.hpp"
#include "pgmult/numerics.hpp"
#include "pgmult/parallel.hpp"

// Stochastic variational inference for the SB-CTM. The posterior factorizes
// over per-document (psi, omega, z) and global (beta, mu, Sigma) blocks;
// q(omega) is restricted to Polya-gamma form so only its mean enters the
// psi update, and q(psi) is Gaussian by conjugacy of the augmented model.

namespace pgmult {

namespace {

double digamma(double x) {
  // standard recurrence + asymptotic series
  double result = 0.0;
  while (x < 6.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
  return result;
}

// mean of PG(1, psi) as a function of psi
double pg1_mean_fn(double psi) {
  if (std::fabs(psi) < 1e-4) return 0.25 - psi * psi / 48.0;
  return std::tanh(0.5 * psi) / (2.0 * psi);
}

const std::pair<Vec, Vec>& gh_rule() {
  static const std::pair<Vec, Vec> rule = gauss_hermite(40);
  return rule;
}

}  // namespace

double svi_expected_omega(double exp_residual, double psi_mean, double psi_var) {
  if (exp_residual <= 0.0) return 0.0;
  const auto& [nodes, weights] = gh_rule();
  double scale = std::sqrt(2.0 * std::max(psi_var, 0.0));
  double e = 0.0;
  for (int i = 0; i < nodes.size(); ++i)
    e += weights[i] * pg1_mean_fn(psi_mean + scale * nodes[i]);
  return exp_residual * e;
}

CTMVarState ctm_svi_init(const Corpus& corpus, int T, const CTMHyper& hyper) {
  if (T < 1) throw ParameterError("ctm_svi_init: T must be positive");
  CTMVarState vs;
  vs.T = T;
  vs.hyper = hyper;
  if (vs.hyper.niw.mean0.size() != T - 1)
    vs.hyper.niw = NIWParams::standard(T - 1);
  vs.beta_ss = Mat::Zero(T, corpus.vocab_size);
  vs.beta_alpha = Mat::Constant(T, corpus.vocab_size, hyper.alpha_beta);
  vs.n_ss = 0.0;
  vs.psi_sum_ss = Vec::Zero(T - 1);
  vs.psi_scatter_ss = Mat::Zero(T - 1, T - 1);
  vs.niw_post = vs.hyper.niw;
  return vs;
}

SviLocal ctm_svi_local(const CTMVarState& vs, const std::vector<int>& doc, Rng& rng) {
  const int T = vs.T;
  const int n = static_cast<int>(doc.size());
  const int p = T - 1;
  SviLocal local;
  local.resp = Mat::Zero(n, T);
  local.psi_mean = Vec::Zero(p);
  local.psi_cov = Mat::Zero(p, p);
  local.exp_omega = Vec::Zero(p);
  local.exp_kappa = Vec::Zero(p);
  if (T == 1) {
    local.resp.setOnes();
    return local;
  }

  // E[log beta_{t,w}] for the words in this document
  Mat elog_beta(T, n);
  Vec row_dig(T);
  for (int t = 0; t < T; ++t) row_dig[t] = digamma(vs.beta_alpha.row(t).sum());
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < T; ++t)
      elog_beta(t, i) = digamma(vs.beta_alpha(t, doc[i])) - row_dig[t];

  // expectations of the NIW global factor
  Eigen::LLT<Mat> psi_llt = chol_jittered(vs.niw_post.psi0, "ctm_svi_local");
  Mat exp_prec = vs.niw_post.nu0 * psi_llt.solve(Mat::Identity(p, p));
  Vec exp_prec_mu = exp_prec * vs.niw_post.mean0;

  Eigen::LLT<Mat> prec_llt = chol_jittered(exp_prec, "ctm_svi_local(prior)");
  local.psi_mean = vs.niw_post.mean0;
  local.psi_cov = prec_llt.solve(Mat::Identity(p, p));

  Vec elog_theta = Vec::Zero(T);
  auto refresh_elog_theta = [&]() {
    elog_theta.setZero();
    Eigen::LLT<Mat> cov_llt = chol_jittered(local.psi_cov, "ctm_svi_local(q psi)");
    for (int s = 0; s < vs.mc_elogtheta; ++s) {
      Vec zdraw(p);
      for (int i = 0; i < p; ++i) zdraw[i] = rng.normal();
      Vec theta = pi_sb(local.psi_mean + cov_llt.matrixL() * zdraw);
      for (int t = 0; t < T; ++t)
        elog_theta[t] += std::log(std::max(theta[t], 1e-300));
    }
    elog_theta /= static_cast<double>(vs.mc_elogtheta);
  };
  refresh_elog_theta();

  auto update_resp = [&]() {
    for (int i = 0; i < n; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int t = 0; t < T; ++t)
        mx = std::max(mx, elog_beta(t, i) + elog_theta[t]);
      double z = 0.0;
      for (int t = 0; t < T; ++t) {
        local.resp(i, t) = std::exp(elog_beta(t, i) + elog_theta[t] - mx);
        z += local.resp(i, t);
      }
      local.resp.row(i) /= z;
    }
  };
  update_resp();

  for (int iter = 0; iter < vs.inner_iters; ++iter) {
    // expected counts, residuals and kappa from q(z)
    Vec exp_c = local.resp.colwise().sum().transpose();
    double remain = static_cast<double>(n);
    for (int t = 0; t < p; ++t) {
      local.exp_kappa[t] = exp_c[t] - 0.5 * remain;
      local.exp_omega[t] = svi_expected_omega(
          remain, local.psi_mean[t], local.psi_cov(t, t));
      remain -= exp_c[t];
    }
    // q(psi): Gaussian with precision E[Sigma^-1] + diag(E[omega])
    Mat lambda = exp_prec;
    lambda.diagonal() += local.exp_omega;
    Vec h = exp_prec_mu + local.exp_kappa;
    Eigen::LLT<Mat> llt = chol_jittered(lambda, "ctm_svi_local(update)");
    local.psi_mean = llt.solve(h);
    local.psi_cov = llt.solve(Mat::Identity(p, p));
    local.psi_cov = 0.5 * (local.psi_cov + local.psi_cov.transpose()).eval();

    refresh_elog_theta();
    update_resp();
  }

  // final omega/kappa consistent with the last resp and q(psi)
  Vec exp_c = local.resp.colwise().sum().transpose();
  double remain = static_cast<double>(n);
  for (int t = 0; t < p; ++t) {
    local.exp_kappa[t] = exp_c[t] - 0.5 * remain;
    local.exp_omega[t] =
        svi_expected_omega(remain, local.psi_mean[t], local.psi_cov(t, t));
    remain -= exp_c[t];
  }
  return local;
}

void ctm_svi_step(CTMVarState& vs, const Corpus& corpus,
                  const std::vector<int>& minibatch, double step_size, RngKey key,
                  std::uint64_t step_index) {
  if (minibatch.empty()) throw ParameterError("ctm_svi_step: empty minibatch");
  if (!(step_size > 0.0) || step_size > 1.0)
    throw ParameterError("ctm_svi_step: step_size must lie in (0, 1]");
  const int T = vs.T;
  const int p = T - 1;
  const double scale = static_cast<double>(corpus.docs.size()) /
                       static_cast<double>(minibatch.size());

  std::vector<SviLocal> locals(minibatch.size());
  parallel_for(minibatch.size(), [&](std::size_t i) {
    Rng rng = key.lane(step_index, static_cast<std::uint64_t>(minibatch[i]));
    locals[i] = ctm_svi_local(vs, corpus.docs[minibatch[i]], rng);
  });

  Mat beta_hat = Mat::Zero(T, corpus.vocab_size);
  Vec psi_sum_hat = Vec::Zero(p);
  Mat psi_scatter_hat = Mat::Zero(p, p);
  for (std::size_t i = 0; i < minibatch.size(); ++i) {
    const auto& doc = corpus.docs[minibatch[i]];
    const SviLocal& loc = locals[i];
    for (std::size_t nn = 0; nn < doc.size(); ++nn)
      beta_hat.col(doc[nn]) += loc.resp.row(nn).transpose();
    psi_sum_hat += loc.psi_mean;
    psi_scatter_hat += loc.psi_cov + loc.psi_mean * loc.psi_mean.transpose();
  }
  beta_hat *= scale;
  psi_sum_hat *= scale;
  psi_scatter_hat *= scale;
  double n_hat = scale * static_cast<double>(minibatch.size());

  const double rho = step_size;
  vs.beta_ss = (1.0 - rho) * vs.beta_ss + rho * beta_hat;
  vs.n_ss = (1.0 - rho) * vs.n_ss + rho * n_hat;
  vs.psi_sum_ss = (1.0 - rho) * vs.psi_sum_ss + rho * psi_sum_hat;
  vs.psi_scatter_ss = (1.0 - rho) * vs.psi_scatter_ss + rho * psi_scatter_hat;

  vs.beta_alpha = vs.beta_ss.array() + vs.hyper.alpha_beta;
  if (p > 0)
    vs.niw_post = niw_posterior_params(vs.hyper.niw, vs.n_ss, vs.psi_sum_ss,
                                       vs.psi_scatter_ss);
}

CTMSample ctm_svi_point_estimate(const CTMVarState& vs) {
  CTMSample s;
  s.topics = vs.beta_alpha;
  for (int t = 0; t < s.topics.rows(); ++t) s.topics.row(t) /= s.topics.row(t).sum();
  const int p = vs.T - 1;
  if (p > 0) {
    s.mu = vs.niw_post.mean0;
    double denom = vs.niw_post.nu0 - p - 1.0;
    s.Sigma = denom > 0.0 ? Mat(vs.niw_post.psi0 / denom)
                          : Mat(Mat::Identity(p, p));
  } else {
    s.mu = Vec(0);
    s.Sigma = Mat(0, 0);
  }
  return s;
}

}  // namespace pgmult
