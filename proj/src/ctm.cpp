#include "pgmult/ctm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "pgmult/augmentation.hpp"
#include "pgmult/parallel.hpp"

namespace pgmult {

namespace {

// block tags for per-sweep rng lanes
enum Block : std::uint64_t {
  kBlockZ = 0,
  kBlockBeta = 1,
  kBlockPsi = 2,
  kBlockNIW = 3,
  kBlockOmega = 4,
  kBlockInit = 5,
};

std::uint64_t block_key(std::uint64_t sweep, Block b) { return sweep * 8 + b; }

CountVector doc_counts(const Mat& counts, int d) {
  IVec c(counts.cols());
  for (int t = 0; t < counts.cols(); ++t)
    c[t] = static_cast<int>(std::llround(counts(d, t)));
  return CountVector(c);
}

// iteration order that visits documents by ascending lane id, so reductions
// are invariant to relabeling documents together with their lanes
std::vector<int> lane_order(int D, const std::vector<std::uint64_t>& lane_ids) {
  std::vector<int> order(D);
  std::iota(order.begin(), order.end(), 0);
  if (!lane_ids.empty()) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return lane_ids[static_cast<std::size_t>(a)] <
             lane_ids[static_cast<std::size_t>(b)];
    });
  }
  return order;
}

}  // namespace

std::pair<Corpus, CTMState> ctm_generate(int T, int V, int D, int doc_len,
                                         const Eigen::Ref<const Vec>& mu,
                                         const Eigen::Ref<const Mat>& Sigma,
                                         double alpha_beta, Rng& rng) {
  if (T < 1 || V < 1 || D < 1 || doc_len < 0)
    throw ParameterError("ctm_generate: sizes must be positive");
  if (mu.size() != T - 1 || Sigma.rows() != T - 1 || Sigma.cols() != T - 1)
    throw ParameterError("ctm_generate: prior dimension must be T-1");

  CTMState state;
  state.hyper.alpha_beta = alpha_beta;
  state.hyper.niw = NIWParams::standard(T - 1);
  state.topics = Mat(T, V);
  Vec alpha = Vec::Constant(V, alpha_beta);
  for (int t = 0; t < T; ++t) state.topics.row(t) = rng.dirichlet(alpha).transpose();
  state.mu = mu;
  state.Sigma = Sigma;
  state.psi = Mat(D, T - 1);
  state.omega = Mat::Zero(D, T - 1);
  state.counts = Mat::Zero(D, T);
  state.z.resize(D);

  Corpus corpus;
  corpus.vocab_size = V;
  corpus.docs.resize(D);
  MVNParams prior{mu, Sigma};
  for (int d = 0; d < D; ++d) {
    Vec psi_d = mvn_sample(prior, rng);
    state.psi.row(d) = psi_d.transpose();
    Vec theta = pi_sb(psi_d);
    corpus.docs[d].resize(doc_len);
    state.z[d].resize(doc_len);
    for (int n = 0; n < doc_len; ++n) {
      int t = rng.categorical(theta);
      state.z[d][n] = t;
      state.counts(d, t) += 1.0;
      corpus.docs[d][n] = rng.categorical(state.topics.row(t).transpose());
    }
    CountVector cv = doc_counts(state.counts, d);
    state.omega.row(d) = sample_aux(cv, psi_d, rng).omega.transpose();
  }
  return {std::move(corpus), std::move(state)};
}

CTMState ctm_init(const Corpus& corpus, int T, const CTMHyper& hyper, RngKey key) {
  const int D = static_cast<int>(corpus.docs.size());
  const int V = corpus.vocab_size;
  CTMState state;
  state.hyper = hyper;
  if (state.hyper.niw.mean0.size() != T - 1)
    state.hyper.niw = NIWParams::standard(T - 1);
  state.mu = Vec::Zero(T - 1);
  state.Sigma = Mat::Identity(T - 1, T - 1);
  state.psi = Mat::Zero(D, T - 1);
  state.omega = Mat::Zero(D, T - 1);
  state.counts = Mat::Zero(D, T);
  state.z.resize(D);

  Mat word_counts = Mat::Constant(T, V, hyper.alpha_beta);
  for (int d = 0; d < D; ++d) {
    Rng rng = key.lane(block_key(0, kBlockInit), d);
    state.z[d].resize(corpus.docs[d].size());
    for (std::size_t n = 0; n < corpus.docs[d].size(); ++n) {
      int t = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(T));
      state.z[d][n] = t;
      state.counts(d, t) += 1.0;
      word_counts(t, corpus.docs[d][n]) += 1.0;
    }
    CountVector cv = doc_counts(state.counts, d);
    state.omega.row(d) =
        sample_aux(cv, state.psi.row(d).transpose(), rng).omega.transpose();
  }
  Rng beta_rng = key.lane(block_key(0, kBlockInit), static_cast<std::uint64_t>(D) + 1);
  state.topics = Mat(T, V);
  for (int t = 0; t < T; ++t)
    state.topics.row(t) = beta_rng.dirichlet(word_counts.row(t).transpose()).transpose();
  return state;
}

void ctm_gibbs_sweep(CTMState& state, const Corpus& corpus, RngKey key,
                     std::uint64_t sweep,
                     const std::vector<std::uint64_t>& lane_ids) {
  const int D = static_cast<int>(corpus.docs.size());
  const int T = state.n_topics();
  const int V = corpus.vocab_size;
  if (!lane_ids.empty() && static_cast<int>(lane_ids.size()) != D)
    throw ParameterError("ctm_gibbs_sweep: lane_ids size mismatch");
  auto lane_of = [&](int d) {
    return lane_ids.empty() ? static_cast<std::uint64_t>(d) : lane_ids[d];
  };

  // z | w, beta, psi
  parallel_for(D, [&](std::size_t d) {
    Rng rng = key.lane(block_key(sweep, kBlockZ), lane_of(static_cast<int>(d)));
    Vec theta = pi_sb(state.psi.row(d).transpose());
    Vec probs(T);
    state.counts.row(d).setZero();
    for (std::size_t n = 0; n < corpus.docs[d].size(); ++n) {
      int w = corpus.docs[d][n];
      for (int t = 0; t < T; ++t) probs[t] = theta[t] * state.topics(t, w);
      int t = rng.categorical(probs);
      state.z[d][n] = t;
      state.counts(d, t) += 1.0;
    }
  });

  // beta | z, w
  {
    Mat word_counts = Mat::Constant(T, V, state.hyper.alpha_beta);
    std::vector<int> order = lane_order(D, lane_ids);
    for (int d : order)
      for (std::size_t n = 0; n < corpus.docs[d].size(); ++n)
        word_counts(state.z[d][n], corpus.docs[d][n]) += 1.0;
    Rng rng = key.lane(block_key(sweep, kBlockBeta), 0);
    for (int t = 0; t < T; ++t)
      state.topics.row(t) = rng.dirichlet(word_counts.row(t).transpose()).transpose();
  }

  // psi | z, mu, Sigma, omega  (joint Gaussian per document)
  if (T > 1) {
    parallel_for(D, [&](std::size_t d) {
      Rng rng = key.lane(block_key(sweep, kBlockPsi), lane_of(static_cast<int>(d)));
      CountVector cv = doc_counts(state.counts, static_cast<int>(d));
      GaussianPotential pot = evidence(cv, {state.omega.row(d).transpose()});
      MVNParams post = condition_diag(state.mu, state.Sigma, pot);
      state.psi.row(d) = mvn_sample(post, rng).transpose();
    });
  }

  // (mu, Sigma) | psi
  if (T > 1) {
    Vec sum_psi = Vec::Zero(T - 1);
    Mat scatter = Mat::Zero(T - 1, T - 1);
    std::vector<int> order = lane_order(D, lane_ids);
    for (int d : order) {
      Vec p = state.psi.row(d).transpose();
      sum_psi += p;
      scatter += p * p.transpose();
    }
    NIWParams post = niw_posterior_params(state.hyper.niw, D, sum_psi, scatter);
    Rng rng = key.lane(block_key(sweep, kBlockNIW), 0);
    MVNParams draw = niw_sample(post, rng);
    state.mu = draw.mean;
    state.Sigma = draw.cov;
  }

  // omega | psi, z
  if (T > 1) {
    parallel_for(D, [&](std::size_t d) {
      Rng rng = key.lane(block_key(sweep, kBlockOmega), lane_of(static_cast<int>(d)));
      CountVector cv = doc_counts(state.counts, static_cast<int>(d));
      state.omega.row(d) =
          sample_aux(cv, state.psi.row(d).transpose(), rng).omega.transpose();
    });
  }
}

double heldout_predictive_ll(const std::vector<CTMSample>& samples,
                             const Corpus& test, double split_ratio, RngKey key,
                             const HeldoutOpts& opts) {
  if (samples.empty())
    throw ParameterError("heldout_predictive_ll: need at least one posterior sample");
  const int D = static_cast<int>(test.docs.size());
  const int T = static_cast<int>(samples.front().topics.rows());

  std::vector<double> doc_ll(D, 0.0);
  std::vector<long> doc_tokens(D, 0);

  parallel_for(D, [&](std::size_t d) {
    const auto& doc = test.docs[d];
    if (doc.empty()) return;
    Rng split_rng = key.lane(0, d);
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
      const CTMSample& smp = samples[s];
      Rng rng = key.lane(1 + s, d);
      Vec psi = smp.mu;
      std::vector<int> zc(T, 0);
      Vec probs(T);
      for (int it = 0; it < opts.local_burn + opts.local_kept; ++it) {
        Vec theta = pi_sb(psi);
        std::fill(zc.begin(), zc.end(), 0);
        for (int w : observed) {
          for (int t = 0; t < T; ++t) probs[t] = theta[t] * smp.topics(t, w);
          zc[rng.categorical(probs)] += 1;
        }
        if (T > 1) {
          IVec c(T);
          for (int t = 0; t < T; ++t) c[t] = zc[t];
          CountVector cv(c);
          PGAuxiliaries aux = sample_aux(cv, psi, rng);
          MVNParams post = condition_diag(smp.mu, smp.Sigma, evidence(cv, aux));
          psi = mvn_sample(post, rng);
        }
        if (it >= opts.local_burn) {
          Vec theta_now = pi_sb(psi);
          for (std::size_t h = 0; h < heldout.size(); ++h) {
            double p = 0.0;
            for (int t = 0; t < T; ++t) p += theta_now[t] * smp.topics(t, heldout[h]);
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
    throw DataError("heldout_predictive_ll: no held-out tokens");
  return total_ll / static_cast<double>(total_tokens);
}

Mat topic_correlation(const std::vector<CTMSample>& samples, int n_mc, RngKey key) {
  if (samples.empty()) throw ParameterError("topic_correlation: no samples");
  const int T = static_cast<int>(samples.front().topics.rows());
  Mat corr_sum = Mat::Zero(T, T);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    Rng rng = key.lane(2000 + s, 0);
    MVNParams prior{samples[s].mu, samples[s].Sigma};
    Vec mean = Vec::Zero(T);
    Mat second = Mat::Zero(T, T);
    for (int i = 0; i < n_mc; ++i) {
      Vec theta = pi_sb(mvn_sample(prior, rng));
      mean += theta;
      second += theta * theta.transpose();
    }
    mean /= n_mc;
    Mat cov = second / n_mc - mean * mean.transpose();
    Mat corr(T, T);
    for (int i = 0; i < T; ++i)
      for (int j = 0; j < T; ++j) {
        double denom = std::sqrt(std::max(cov(i, i) * cov(j, j), 1e-300));
        corr(i, j) = cov(i, j) / denom;
      }
    corr_sum += corr;
  }
  return corr_sum / static_cast<double>(samples.size());
}

CTMFitResult ctm_fit(const Corpus& corpus, int T, const CTMHyper& hyper,
                     int sweeps, int burnin, int thin, RngKey key) {
  CTMFitResult result;
  CTMState state = ctm_init(corpus, T, hyper, key);
  const long tokens = std::max<long>(corpus.total_tokens(), 1);
  for (int s = 0; s < sweeps; ++s) {
    auto t0 = std::chrono::steady_clock::now();
    ctm_gibbs_sweep(state, corpus, key, static_cast<std::uint64_t>(s) + 1);
    auto t1 = std::chrono::steady_clock::now();
    result.sweep_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

    double ll = 0.0;
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
      Vec theta = pi_sb(state.psi.row(d).transpose());
      for (int w : corpus.docs[d]) {
        double p = 0.0;
        for (int t = 0; t < T; ++t) p += theta[t] * state.topics(t, w);
        ll += std::log(std::max(p, 1e-300));
      }
    }
    result.train_per_token_ll.push_back(ll / static_cast<double>(tokens));

    if (s >= burnin && (thin <= 1 || (s - burnin) % thin == 0))
      result.samples.push_back({state.topics, state.mu, state.Sigma, state.psi});
  }
  return result;
}

}  // namespace pgmult
