#include <cmath>
#include <numeric>

#include "pgmult/ctm.hpp"
#include "pgmult/parallel.hpp"

namespace pgmult {

std::vector<LDASample> lda_collapsed_gibbs(const Corpus& corpus, int T,
                                           double alpha_theta, double alpha_beta,
                                           int sweeps, int burnin, int thin,
                                           RngKey key) {
  if (T < 1) throw ParameterError("lda_collapsed_gibbs: T must be positive");
  const int D = static_cast<int>(corpus.docs.size());
  const int V = corpus.vocab_size;

  std::vector<std::vector<int>> z(D);
  Mat ndt = Mat::Zero(D, T);   // doc-topic
  Mat mtv = Mat::Zero(T, V);   // topic-word
  Vec mt = Vec::Zero(T);       // topic totals

  Rng init_rng = key.lane(0, 0);
  for (int d = 0; d < D; ++d) {
    z[d].resize(corpus.docs[d].size());
    for (std::size_t n = 0; n < corpus.docs[d].size(); ++n) {
      int t = static_cast<int>(init_rng.bits() % static_cast<std::uint64_t>(T));
      z[d][n] = t;
      ndt(d, t) += 1.0;
      mtv(t, corpus.docs[d][n]) += 1.0;
      mt[t] += 1.0;
    }
  }

  std::vector<LDASample> samples;
  Vec probs(T);
  for (int s = 0; s < sweeps; ++s) {
    Rng rng = key.lane(1 + s, 0);
    for (int d = 0; d < D; ++d) {
      for (std::size_t n = 0; n < corpus.docs[d].size(); ++n) {
        int w = corpus.docs[d][n];
        int old = z[d][n];
        ndt(d, old) -= 1.0;
        mtv(old, w) -= 1.0;
        mt[old] -= 1.0;
        for (int t = 0; t < T; ++t)
          probs[t] = (ndt(d, t) + alpha_theta) * (mtv(t, w) + alpha_beta) /
                     (mt[t] + V * alpha_beta);
        int t_new = rng.categorical(probs);
        z[d][n] = t_new;
        ndt(d, t_new) += 1.0;
        mtv(t_new, w) += 1.0;
        mt[t_new] += 1.0;
      }
    }
    if (s >= burnin && (thin <= 1 || (s - burnin) % thin == 0)) {
      Rng beta_rng = key.lane(1 + s, 1);
      Mat topics(T, V);
      for (int t = 0; t < T; ++t) {
        Vec a = mtv.row(t).transpose().array() + alpha_beta;
        topics.row(t) = beta_rng.dirichlet(a).transpose();
      }
      samples.push_back({topics});
    }
  }
  return samples;
}

double lda_heldout_predictive_ll(const std::vector<LDASample>& samples,
                                 const Corpus& test, double split_ratio,
                                 double alpha_theta, RngKey key,
                                 const HeldoutOpts& opts) {
  if (samples.empty())
    throw ParameterError("lda_heldout_predictive_ll: need posterior samples");
  const int D = static_cast<int>(test.docs.size());
  const int T = static_cast<int>(samples.front().topics.rows());

  std::vector<double> doc_ll(D, 0.0);
  std::vector<long> doc_tokens(D, 0);

  parallel_for(D, [&](std::size_t d) {
    const auto& doc = test.docs[d];
    if (doc.empty()) return;
    Rng split_rng = key.lane(0, d);  // same split protocol as the SB-CTM
    std::vector<int> idx(doc.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[split_rng.bits() % i]);
    std::size_t n_obs = static_cast<std::size_t>(
        std::floor(split_ratio * static_cast<double>(doc.size())));
    std::vector<int> observed, heldout;
    for (std::size_t i = 0; i < idx.size(); ++i)
      (i < n_obs ? observed : heldout).push_back(doc[idx[i]]);
    if (heldout.empty()) return;

    Vec prob_sum = Vec::Zero(static_cast<int>(heldout.size()));
    long draws = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const Mat& topics = samples[s].topics;
      Rng rng = key.lane(1 + s, d);
      std::vector<int> ztok(observed.size(), 0);
      Vec c = Vec::Zero(T);
      for (std::size_t n = 0; n < observed.size(); ++n) {
        int t = T == 1 ? 0 : static_cast<int>(rng.bits() % static_cast<std::uint64_t>(T));
        ztok[n] = t;
        c[t] += 1.0;
      }
      Vec probs(T);
      for (int it = 0; it < opts.local_burn + opts.local_kept; ++it) {
        for (std::size_t n = 0; n < observed.size(); ++n) {
          int w = observed[n];
          int old = ztok[n];
          c[old] -= 1.0;
          for (int t = 0; t < T; ++t)
            probs[t] = (c[t] + alpha_theta) * topics(t, w);
          int t_new = rng.categorical(probs);
          ztok[n] = t_new;
          c[t_new] += 1.0;
        }
        if (it >= opts.local_burn) {
          double denom = static_cast<double>(observed.size()) + T * alpha_theta;
          for (std::size_t h = 0; h < heldout.size(); ++h) {
            double p = 0.0;
            for (int t = 0; t < T; ++t)
              p += (c[t] + alpha_theta) / denom * topics(t, heldout[h]);
            prob_sum[static_cast<int>(h)] += p;
          }
          ++draws;
        }
      }
    }
    double ll = 0.0;
    for (int h = 0; h < prob_sum.size(); ++h)
      ll += std::log(prob_sum[h] / static_cast<double>(draws));
    doc_ll[d] = ll;
    doc_tokens[d] = static_cast<long>(heldout.size());
  });

  double total_ll = 0.0;
  long total_tokens = 0;
  for (int d = 0; d < D; ++d) {
    total_ll += doc_ll[d];
    total_tokens += doc_tokens[d];
  }
  if (total_tokens == 0)
    throw DataError("lda_heldout_predictive_ll: no held-out tokens");
  return total_ll / static_cast<double>(total_tokens);
}

}  // namespace pgmult
