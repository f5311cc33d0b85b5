#include "pgmult/mult_gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pgmult/augmentation.hpp"
#include "pgmult/parallel.hpp"
#include "pgmult/polya_gamma.hpp"

namespace pgmult {

namespace {

CountVector row_counts(const IMat& counts, int m) {
  IVec c = counts.row(m).transpose();
  return CountVector(c);
}

std::vector<int> ranked_indices(const Eigen::Ref<const Vec>& v, bool descending) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (v[a] != v[b]) return descending ? v[a] > v[b] : v[a] < v[b];
    return a < b;  // ties toward the smaller category index
  });
  return idx;
}

}  // namespace

MultGPState multgp_init(const GPCountData& data, GPSpec spec, RngKey key) {
  const int M = static_cast<int>(data.inputs.rows());
  const int K = static_cast<int>(data.counts.cols());
  if (data.counts.rows() != M)
    throw ParameterError("multgp_init: inputs/counts row mismatch");
  if (spec.output_means.size() != K - 1)
    throw ParameterError("multgp_init: output_means must have length K-1");

  MultGPState state;
  state.spec = std::move(spec);
  state.gram = state.spec.gram();
  Eigen::LLT<Mat> llt = chol_jittered(state.gram, "multgp_init");
  state.gram_inv = llt.solve(Mat::Identity(M, M));
  state.psi = Mat::Zero(M, K - 1);
  for (int k = 0; k < K - 1; ++k)
    state.psi.col(k).setConstant(state.spec.output_means[k]);
  state.kappa_mat = Mat::Zero(M, K - 1);
  state.omega = Mat::Zero(M, K - 1);
  for (int m = 0; m < M; ++m) {
    CountVector cv = row_counts(data.counts, m);
    state.kappa_mat.row(m) = kappa(cv).transpose();
    Rng rng = key.lane(0, m);
    state.omega.row(m) =
        sample_aux(cv, state.psi.row(m).transpose(), rng).omega.transpose();
  }
  return state;
}

void multgp_gibbs_sweep(MultGPState& state, const GPCountData& data, RngKey key,
                        std::uint64_t sweep, bool reverse_order) {
  const int M = static_cast<int>(data.inputs.rows());
  const int K = static_cast<int>(data.counts.cols());

  // psi_{:,k} | omega, X : joint Gaussian per output, Gram factored once
  std::vector<int> order(std::max(K - 1, 0));
  std::iota(order.begin(), order.end(), 0);
  if (reverse_order) std::reverse(order.begin(), order.end());
  parallel_for(order.size(), [&](std::size_t i) {
    int k = order[i];
    Rng rng = key.lane(sweep * 2, static_cast<std::uint64_t>(k));
    Mat lambda = state.gram_inv;
    lambda.diagonal() += state.omega.col(k);
    Vec h = state.gram_inv *
                Vec::Constant(M, state.spec.output_means[k]) +
            state.kappa_mat.col(k);
    Eigen::LLT<Mat> llt = chol_jittered(lambda, "multgp_gibbs_sweep");
    Vec mean = llt.solve(h);
    Vec z(M);
    for (int j = 0; j < M; ++j) z[j] = rng.normal();
    state.psi.col(k) = mean + llt.matrixU().solve(z);
  });

  // omega | psi, X
  parallel_for(M, [&](std::size_t m) {
    Rng rng = key.lane(sweep * 2 + 1, m);
    CountVector cv = row_counts(data.counts, static_cast<int>(m));
    state.omega.row(m) =
        sample_aux(cv, state.psi.row(m).transpose(), rng).omega.transpose();
  });
}

MultGPPredictive multgp_predict(const std::vector<Mat>& omega_samples,
                                const MultGPState& state,
                                const Eigen::Ref<const Mat>& test_inputs,
                                int n_psi_draws, int top_k, RngKey key) {
  if (omega_samples.empty())
    throw ParameterError("multgp_predict: need at least one omega sample");
  const int K = static_cast<int>(state.kappa_mat.cols()) + 1;
  const int n_test = static_cast<int>(test_inputs.rows());

  Mat cross = state.spec.gram_cross(test_inputs);
  Mat gram_test = state.spec.gram_at(test_inputs);

  Mat simplex_sum = Mat::Zero(n_test, K);
  long n_acc = 0;
  for (std::size_t s = 0; s < omega_samples.size(); ++s) {
    // analytic Gaussian over test psi for this omega, per output
    std::vector<Mat> draws(K - 1);  // each n_psi_draws x n_test
    parallel_for(static_cast<std::size_t>(K - 1), [&](std::size_t k) {
      Rng rng = key.lane(s, k);
      GaussianPotential pot{omega_samples[s].col(static_cast<int>(k)),
                            state.kappa_mat.col(static_cast<int>(k))};
      Vec mean_tr =
          Vec::Constant(state.gram.rows(), state.spec.output_means[static_cast<int>(k)]);
      Vec mean_te = Vec::Constant(n_test, state.spec.output_means[static_cast<int>(k)]);
      MVNParams pred = gp_predict_marginal(state.gram, cross, gram_test, mean_tr,
                                           mean_te, pot);
      Eigen::LLT<Mat> llt = chol_jittered(pred.cov, "multgp_predict");
      Mat d(n_psi_draws, n_test);
      for (int r = 0; r < n_psi_draws; ++r) {
        Vec z(n_test);
        for (int j = 0; j < n_test; ++j) z[j] = rng.normal();
        d.row(r) = (pred.mean + Mat(llt.matrixL()) * z).transpose();
      }
      draws[k] = std::move(d);
    });
    for (int r = 0; r < n_psi_draws; ++r) {
      for (int j = 0; j < n_test; ++j) {
        Vec psi_row(K - 1);
        for (int k = 0; k < K - 1; ++k) psi_row[k] = draws[k](r, j);
        simplex_sum.row(j) += pi_sb(psi_row).transpose();
      }
      ++n_acc;
    }
  }

  MultGPPredictive out;
  out.mean_simplex = simplex_sum / static_cast<double>(n_acc);
  out.top.resize(n_test);
  out.bottom.resize(n_test);
  for (int j = 0; j < n_test; ++j) {
    Vec row = out.mean_simplex.row(j).transpose();
    std::vector<int> desc = ranked_indices(row, true);
    std::vector<int> asc = ranked_indices(row, false);
    out.top[j].assign(desc.begin(), desc.begin() + std::min<int>(top_k, K));
    out.bottom[j].assign(asc.begin(), asc.begin() + std::min<int>(top_k, K));
  }
  return out;
}

std::pair<int, int> topk_eval(const Eigen::Ref<const Vec>& predicted,
                              const Eigen::Ref<const IVec>& realized, int k) {
  const int K = static_cast<int>(predicted.size());
  if (realized.size() != K) throw ParameterError("topk_eval: length mismatch");
  if (K < 2 * k) throw ParameterError("topk_eval: need K >= 2k");
  Vec real(K);
  for (int i = 0; i < K; ++i) real[i] = realized[i];

  auto hits = [&](bool descending) {
    std::vector<int> p = ranked_indices(predicted, descending);
    std::vector<int> r = ranked_indices(real, descending);
    std::vector<char> in_r(K, 0);
    for (int i = 0; i < k; ++i) in_r[r[i]] = 1;
    int h = 0;
    for (int i = 0; i < k; ++i) h += in_r[p[i]];
    return h;
  };
  return {hits(true), hits(false)};
}

IMat downsample_counts(const IMat& counts, int n, Rng& rng) {
  IMat out(counts.rows(), counts.cols());
  for (int m = 0; m < counts.rows(); ++m) {
    long total = counts.row(m).cast<long>().sum();
    if (total <= n) {
      out.row(m) = counts.row(m);
      continue;
    }
    Vec probs = counts.row(m).cast<double>().transpose();
    out.row(m) = rng.multinomial(n, probs).transpose();
  }
  return out;
}

}  // namespace pgmult
