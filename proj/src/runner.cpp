#include "pgmult/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "pgmult/ctm.hpp"
#include "pgmult/io.hpp"
#include "pgmult/mult_gp.hpp"
#include "pgmult/mult_lds.hpp"
#include "pgmult/parallel.hpp"

namespace pgmult {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
}

const json& require(const json& j, const char* field) {
  if (!j.contains(field))
    throw ConfigError(std::string("config missing required field: ") + field);
  return j.at(field);
}

std::uint64_t require_seed(const json& j) {
  if (!j.contains("seed"))
    throw ConfigError("config must set an explicit seed");
  return j.at("seed").get<std::uint64_t>();
}

struct DiagnosticsRow {
  long sweep;
  double elapsed_s;
  std::string metric_name;
  double metric_value;
};

void write_diagnostics(const std::vector<DiagnosticsRow>& rows,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write diagnostics: " + path);
  out << "sweep,elapsed_s,metric_name,metric_value\n";
  for (const auto& r : rows)
    out << r.sweep << ',' << r.elapsed_s << ',' << r.metric_name << ','
        << r.metric_value << '\n';
}

void write_manifest(const json& config, const std::string& config_path,
                    const std::string& out_path) {
  json manifest;
  manifest["tool"] = "pgmult";
  manifest["version"] = kVersion;
  manifest["config_path"] = config_path;
  manifest["config_hash"] = fnv1a_hex(config.dump());
  manifest["seed"] = config.at("seed");
  manifest["config"] = config;
  write_file(out_path, manifest.dump(2) + "\n");
}

void write_results(const json& results, const std::string& path) {
  write_file(path, results.dump(2) + "\n");
}

fs::path prepare_output_dir(const json& config) {
  std::string dir = require(config, "output_dir").get<std::string>();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output dir: " + dir);
  return fs::path(dir);
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat json_to_matrix(const json& j) {
  if (!j.is_array() || j.empty()) return Mat(0, 0);
  Mat m(j.size(), j.at(0).size());
  for (int i = 0; i < m.rows(); ++i)
    for (int c = 0; c < m.cols(); ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

Vec json_to_vector(const json& j) {
  Vec v(j.size());
  for (int i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

// ---------------------------------------------------------------- ctm / lda

void run_topic_model(const json& config, const fs::path& out_dir,
                     std::ostream& log) {
  const std::string model = config.at("model").get<std::string>();
  std::uint64_t seed = require_seed(config);
  const json& data = require(config, "data");
  Corpus corpus = read_corpus(require(data, "corpus").get<std::string>());
  bool have_test = data.contains("test_corpus");
  Corpus test;
  if (have_test) {
    test = read_corpus(data.at("test_corpus").get<std::string>(), corpus.vocab_size);
    corpus.vocab_size = test.vocab_size = std::max(corpus.vocab_size, test.vocab_size);
  }

  const json& params = require(config, "params");
  int T = require(params, "topics").get<int>();
  double alpha_beta = params.value("alpha_beta", 0.1);
  int sweeps = config.value("sweeps", 200);
  int burnin = config.value("burnin", sweeps / 2);
  int thin = config.value("thin", 2);
  double split = config.contains("eval")
                     ? config.at("eval").value("heldout_split", 0.5)
                     : 0.5;
  int corr_mc = config.contains("eval") ? config.at("eval").value("corr_mc", 2000)
                                        : 2000;

  json results;
  results["model"] = model;
  results["vocab_size"] = corpus.vocab_size;
  results["documents"] = corpus.docs.size();
  results["topics"] = T;

  std::vector<DiagnosticsRow> diag;
  if (model == "ctm") {
    CTMHyper hyper;
    hyper.alpha_beta = alpha_beta;
    hyper.niw = NIWParams::standard(T - 1);
    CTMFitResult fit = ctm_fit(corpus, T, hyper, sweeps, burnin, thin, {seed, 0});
    for (int s = 0; s < sweeps; ++s)
      diag.push_back({s, fit.sweep_seconds[s], "train_per_token_ll",
                      fit.train_per_token_ll[s]});
    results["kept_samples"] = fit.samples.size();
    if (have_test)
      results["per_token_heldout_ll"] =
          heldout_predictive_ll(fit.samples, test, split, {seed, 1});
    else
      results["per_token_heldout_ll"] = nullptr;
    results["topic_correlation"] =
        matrix_to_json(topic_correlation(fit.samples, corr_mc, {seed, 2}));
  } else if (model == "lda") {
    double alpha_theta = params.value("alpha_theta", 1.0);
    std::vector<double> sweep_seconds;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<LDASample> samples = lda_collapsed_gibbs(
        corpus, T, alpha_theta, alpha_beta, sweeps, burnin, thin, {seed, 0});
    auto t1 = std::chrono::steady_clock::now();
    diag.push_back({sweeps - 1,
                    std::chrono::duration<double>(t1 - t0).count(),
                    "total_gibbs_seconds", 0.0});
    results["kept_samples"] = samples.size();
    if (have_test)
      results["per_token_heldout_ll"] = lda_heldout_predictive_ll(
          samples, test, split, alpha_theta, {seed, 1});
    else
      results["per_token_heldout_ll"] = nullptr;
  } else {  // ctm-svi
    CTMHyper hyper;
    hyper.alpha_beta = alpha_beta;
    hyper.niw = NIWParams::standard(T - 1);
    int steps = params.value("steps", 100);
    int minibatch_size = params.value("minibatch", 0);  // 0 = full batch
    double fixed_step = params.value("step_size", 0.0);
    double power = params.value("step_size_power", 0.7);
    double delay = params.value("step_size_delay", 1.0);

    CTMVarState vs = ctm_svi_init(corpus, T, hyper);
    const int D = static_cast<int>(corpus.docs.size());
    RngKey key{seed, 0};
    for (int s = 0; s < steps; ++s) {
      auto t0 = std::chrono::steady_clock::now();
      std::vector<int> mb;
      if (minibatch_size <= 0 || minibatch_size >= D) {
        mb.resize(D);
        std::iota(mb.begin(), mb.end(), 0);
      } else {
        Rng pick = key.lane(900000 + s, 0);
        for (int i = 0; i < minibatch_size; ++i)
          mb.push_back(static_cast<int>(pick.bits() % static_cast<std::uint64_t>(D)));
      }
      double rho = fixed_step > 0.0
                       ? fixed_step
                       : std::pow(delay + static_cast<double>(s), -power);
      rho = std::min(rho, 1.0);
      ctm_svi_step(vs, corpus, mb, rho, key, static_cast<std::uint64_t>(s));
      auto t1 = std::chrono::steady_clock::now();

      // cheap running metric: minibatch per-token predictive LL under the
      // current point estimates
      CTMSample pe = ctm_svi_point_estimate(vs);
      double ll = 0.0;
      long tokens = 0;
      Rng theta_rng = key.lane(910000 + s, 0);
      for (int d : mb) {
        Vec theta = Vec::Constant(T, 1.0 / T);
        if (T > 1) {
          Vec acc = Vec::Zero(T);
          MVNParams q{pe.mu, pe.Sigma};
          for (int r = 0; r < 20; ++r) acc += pi_sb(mvn_sample(q, theta_rng));
          theta = acc / 20.0;
        }
        for (int w : corpus.docs[d]) {
          double p = 0.0;
          for (int t = 0; t < T; ++t) p += theta[t] * pe.topics(t, w);
          ll += std::log(std::max(p, 1e-300));
          ++tokens;
        }
      }
      diag.push_back({s, std::chrono::duration<double>(t1 - t0).count(),
                      "minibatch_per_token_ll",
                      tokens ? ll / static_cast<double>(tokens) : 0.0});
    }
    CTMSample pe = ctm_svi_point_estimate(vs);
    results["kept_samples"] = 1;
    if (have_test)
      results["per_token_heldout_ll"] =
          heldout_predictive_ll({pe}, test, split, {seed, 1});
    else
      results["per_token_heldout_ll"] = nullptr;
    if (T > 1)
      results["topic_correlation"] =
          matrix_to_json(topic_correlation({pe}, corr_mc, {seed, 2}));
  }

  write_diagnostics(diag, (out_dir / "diagnostics.csv").string());
  write_results(results, (out_dir / "results.json").string());
  log << model << ": wrote " << (out_dir / "results.json").string() << "\n";
}

// ------------------------------------------------------------------ multgp

std::vector<int> frequency_order(const IMat& counts) {
  std::vector<int> order(counts.cols());
  std::iota(order.begin(), order.end(), 0);
  std::vector<long> totals(counts.cols());
  for (int k = 0; k < counts.cols(); ++k)
    totals[k] = counts.col(k).cast<long>().sum();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return totals[a] > totals[b]; });
  return order;
}

void run_multgp(const json& config, const fs::path& out_dir, std::ostream& log) {
  std::uint64_t seed = require_seed(config);
  const json& data = require(config, "data");
  int input_dims = require(data, "input_dims").get<int>();
  GPCountCSV train = read_gp_csv(require(data, "csv").get<std::string>(), input_dims);

  const json& params = require(config, "params");
  int sweeps = config.value("sweeps", 200);
  int burnin = config.value("burnin", sweeps / 2);
  int thin = config.value("thin", 10);
  int omega_cap = params.value("omega_samples", 50);
  int psi_draws = params.value("psi_draws", 200);
  int top_k = params.value("top_k", 10);

  RngKey key{seed, 0};

  json preprocess = config.value("preprocess", json::object());
  int downsample_to = preprocess.value("downsample_to", 0);
  if (downsample_to > 0) {
    Rng rng = key.lane(800000, 0);
    train.counts = downsample_counts(train.counts, downsample_to, rng);
  }
  bool reorder = preprocess.value("reorder_categories", false);
  std::vector<int> order(train.counts.cols());
  std::iota(order.begin(), order.end(), 0);
  if (reorder) {
    order = frequency_order(train.counts);
    IMat permuted(train.counts.rows(), train.counts.cols());
    std::vector<std::string> names(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      permuted.col(static_cast<int>(i)) = train.counts.col(order[i]);
      names[i] = train.category_names[order[i]];
    }
    train.counts = permuted;
    train.category_names = names;
  }

  const int K = static_cast<int>(train.counts.cols());
  GPSpec spec;
  const json& kparams = require(params, "kernel");
  spec.kernel.variance = kparams.value("variance", 1.0);
  if (kparams.contains("lengthscales")) {
    spec.kernel.lengthscales = json_to_vector(kparams.at("lengthscales"));
    if (spec.kernel.lengthscales.size() != input_dims)
      throw ConfigError("kernel lengthscales must match input_dims");
  } else {
    spec.kernel.lengthscales =
        Vec::Constant(input_dims, kparams.value("lengthscale", 1.0));
  }
  spec.inputs = train.inputs;

  std::string mean_mode = params.value("output_mean", "empirical");
  if (mean_mode == "empirical") {
    Vec freq = train.counts.cast<double>().colwise().sum().transpose();
    freq.array() += 0.5;
    freq /= freq.sum();
    spec.output_means = pi_sb_inv(freq);
  } else {
    spec.output_means = Vec::Zero(K - 1);
  }

  GPCountData gpdata{train.inputs, train.counts};
  MultGPState state = multgp_init(gpdata, spec, key);
  std::vector<Mat> omega_samples;
  std::vector<DiagnosticsRow> diag;
  long total_counts = std::max<long>(train.counts.cast<long>().sum(), 1);
  for (int s = 0; s < sweeps; ++s) {
    auto t0 = std::chrono::steady_clock::now();
    multgp_gibbs_sweep(state, gpdata, key, static_cast<std::uint64_t>(s) + 1);
    auto t1 = std::chrono::steady_clock::now();
    double ll = 0.0;
    for (int m = 0; m < train.counts.rows(); ++m) {
      IVec row = train.counts.row(m).transpose();
      ll += log_multinomial_sb(CountVector(row), state.psi.row(m).transpose());
    }
    diag.push_back({s, std::chrono::duration<double>(t1 - t0).count(),
                    "train_per_count_ll", ll / static_cast<double>(total_counts)});
    if (s >= burnin && (thin <= 1 || (s - burnin) % thin == 0) &&
        static_cast<int>(omega_samples.size()) < omega_cap)
      omega_samples.push_back(state.omega);
  }

  json results;
  results["model"] = "multgp";
  results["categories"] = train.category_names;
  results["kept_omega_samples"] = omega_samples.size();
  results["predictions"] = json::array();

  if (data.contains("test_csv")) {
    GPCountCSV test = read_gp_csv(data.at("test_csv").get<std::string>(), input_dims);
    if (reorder) {
      IMat permuted(test.counts.rows(), test.counts.cols());
      for (std::size_t i = 0; i < order.size(); ++i)
        permuted.col(static_cast<int>(i)) = test.counts.col(order[i]);
      test.counts = permuted;
    }
    MultGPPredictive pred = multgp_predict(omega_samples, state, test.inputs,
                                           psi_draws, top_k, {seed, 7});
    // report in the original category order
    std::vector<int> inverse(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      inverse[order[i]] = static_cast<int>(i);
    for (int j = 0; j < test.inputs.rows(); ++j) {
      json entry;
      json input = json::array();
      for (int c = 0; c < test.inputs.cols(); ++c) input.push_back(test.inputs(j, c));
      entry["input"] = input;
      json simplex = json::array();
      for (int k = 0; k < K; ++k)
        simplex.push_back(pred.mean_simplex(j, inverse[k]));
      entry["mean_simplex"] = simplex;
      json top = json::array(), bottom = json::array();
      for (int i : pred.top[j]) top.push_back(train.category_names[i]);
      for (int i : pred.bottom[j]) bottom.push_back(train.category_names[i]);
      entry["top"] = top;
      entry["bottom"] = bottom;
      if (test.counts.row(j).sum() > 0) {
        auto [th, bh] = topk_eval(pred.mean_simplex.row(j).transpose(),
                                  test.counts.row(j).transpose(), top_k);
        entry["topk_hits"] = th;
        entry["bottomk_hits"] = bh;
      }
      results["predictions"].push_back(std::move(entry));
    }
  }

  write_diagnostics(diag, (out_dir / "diagnostics.csv").string());
  write_results(results, (out_dir / "results.json").string());
  log << "multgp: wrote " << (out_dir / "results.json").string() << "\n";
}

// ------------------------------------------------------------ sbmlds / raw

IMat load_sequence(const json& data, json* info) {
  if (data.contains("csv")) {
    std::vector<std::string> names;
    IMat counts = read_count_csv(data.at("csv").get<std::string>(), &names);
    (*info)["categories"] = counts.cols();
    return counts;
  }
  if (data.contains("corpus")) {
    Corpus corpus = read_corpus(data.at("corpus").get<std::string>());
    std::vector<int> stream;
    for (const auto& doc : corpus.docs)
      stream.insert(stream.end(), doc.begin(), doc.end());
    (*info)["categories"] = corpus.vocab_size;
    (*info)["tokens"] = stream.size();
    return one_hot_rows(stream, corpus.vocab_size);
  }
  if (data.contains("text")) {
    // raw text: tokenize, cap the vocabulary by descending frequency
    int max_vocab = data.value("max_vocab", 200);
    EncodedText enc = encode_text(
        tokenize_text(read_file(data.at("text").get<std::string>())), max_vocab);
    (*info)["categories"] = enc.vocab.size();
    (*info)["tokens"] = enc.tokens.size();
    return one_hot_rows(enc.tokens, static_cast<int>(enc.vocab.size()));
  }
  throw ConfigError("sequence model needs data.csv, data.corpus, or data.text");
}

void run_sequence_model(const json& config, const fs::path& out_dir,
                        std::ostream& log) {
  const std::string model = config.at("model").get<std::string>();
  std::uint64_t seed = require_seed(config);
  json info;
  IMat obs = load_sequence(require(config, "data"), &info);

  const json& params = require(config, "params");
  int D = params.value("state_dim", 10);
  int horizon = require(params, "horizon").get<int>();
  int rollouts = params.value("rollouts", 100);
  int sweeps = config.value("sweeps", 100);
  int burnin = config.value("burnin", sweeps / 2);
  int thin = config.value("thin", 2);

  if (obs.rows() <= horizon + 2)
    throw DataError("sequence shorter than prediction horizon");

  json preprocess = config.value("preprocess", json::object());
  if (preprocess.value("reorder_categories", false)) {
    IMat train_part = obs.topRows(obs.rows() - horizon);
    std::vector<int> order = frequency_order(train_part);
    IMat permuted(obs.rows(), obs.cols());
    for (std::size_t i = 0; i < order.size(); ++i)
      permuted.col(static_cast<int>(i)) = obs.col(order[i]);
    obs = permuted;
  }

  IMat train = obs.topRows(obs.rows() - horizon);
  IMat future = obs.bottomRows(horizon);

  json results;
  results["model"] = model;
  results["data"] = info;
  results["horizon"] = horizon;
  results["normalized_predictive_ll"] = json::object();

  std::vector<DiagnosticsRow> diag;
  long train_counts = std::max<long>(train.cast<long>().sum(), 1);

  if (model == "sbmlds") {
    SBMLDSPriors priors = SBMLDSPriors::standard(D);
    SequenceData seq{train};
    RngKey key{seed, 0};
    MultLDSState state = sbmlds_init(seq, D, priors, key);
    std::vector<MultLDSState> samples;
    for (int s = 0; s < sweeps; ++s) {
      auto t0 = std::chrono::steady_clock::now();
      sbmlds_gibbs_sweep(state, seq, priors, key, static_cast<std::uint64_t>(s) + 1);
      auto t1 = std::chrono::steady_clock::now();
      double ll = 0.0;
      for (int t = 0; t < train.rows(); ++t) {
        IVec row = train.row(t).transpose();
        Vec psi = state.params.C * state.states.row(t).transpose();
        ll += log_multinomial_sb(CountVector(row), psi);
      }
      diag.push_back({s, std::chrono::duration<double>(t1 - t0).count(),
                      "train_per_count_ll", ll / static_cast<double>(train_counts)});
      if (s >= burnin && (thin <= 1 || (s - burnin) % thin == 0))
        samples.push_back(state);
    }
    results["kept_samples"] = samples.size();
    results["normalized_predictive_ll"]["sbmlds"] =
        sbmlds_predictive_ll(samples, future, horizon, train, rollouts, {seed, 1});
  }

  bool want_raw = model == "rawlds";
  if (params.contains("baselines"))
    for (const auto& b : params.at("baselines"))
      want_raw = want_raw || b.get<std::string>() == "rawlds";
  if (want_raw) {
    results["normalized_predictive_ll"]["rawlds"] = raw_lds_fit_predict(
        train, future, D, sweeps, burnin, thin, rollouts, {seed, 2});
  }

  write_diagnostics(diag, (out_dir / "diagnostics.csv").string());
  write_results(results, (out_dir / "results.json").string());
  log << model << ": wrote " << (out_dir / "results.json").string() << "\n";
}

// --------------------------------------------------------------------- gen

void gen_ctm(const json& config, std::ostream& log) {
  std::uint64_t seed = require_seed(config);
  const json& params = require(config, "params");
  const json& out = require(config, "out");
  int T = require(params, "topics").get<int>();
  int V = require(params, "vocab").get<int>();
  int D = require(params, "docs").get<int>();
  int doc_len = require(params, "doc_len").get<int>();
  int test_docs = params.value("test_docs", 0);
  double alpha_beta = params.value("alpha_beta", 0.1);
  Vec mu = params.contains("mu") ? json_to_vector(params.at("mu"))
                                 : Vec(Vec::Zero(T - 1));
  Mat Sigma = params.contains("Sigma") ? json_to_matrix(params.at("Sigma"))
                                       : Mat(Mat::Identity(T - 1, T - 1));

  Rng rng = Rng::keyed(seed, 0xc7);
  auto [corpus, truth] = ctm_generate(T, V, D + test_docs, doc_len, mu, Sigma,
                                      alpha_beta, rng);
  Corpus train, test;
  train.vocab_size = test.vocab_size = V;
  train.docs.assign(corpus.docs.begin(), corpus.docs.begin() + D);
  test.docs.assign(corpus.docs.begin() + D, corpus.docs.end());

  write_corpus(train, require(out, "corpus").get<std::string>());
  if (out.contains("vocab")) {
    std::vector<std::string> vocab;
    for (int v = 0; v < V; ++v) vocab.push_back("w" + std::to_string(v));
    write_vocab(vocab, out.at("vocab").get<std::string>());
  }
  if (test_docs > 0 && out.contains("test_corpus"))
    write_corpus(test, out.at("test_corpus").get<std::string>());
  if (out.contains("truth")) {
    json truth_json;
    truth_json["mu"] = json::array();
    for (int i = 0; i < mu.size(); ++i) truth_json["mu"].push_back(mu[i]);
    truth_json["Sigma"] = matrix_to_json(Sigma);
    truth_json["topics"] = matrix_to_json(truth.topics);
    write_file(out.at("truth").get<std::string>(), truth_json.dump(2) + "\n");
  }
  log << "gen ctm: " << D << " train docs, " << test_docs << " test docs\n";
}

void gen_sbmlds(const json& config, std::ostream& log) {
  std::uint64_t seed = require_seed(config);
  const json& params = require(config, "params");
  const json& out = require(config, "out");
  int T = require(params, "timesteps").get<int>();
  int K = require(params, "categories").get<int>();
  int D = require(params, "state_dim").get<int>();
  int per_step = params.value("counts_per_step", 20);
  double rho = params.value("spectral_radius", 0.95);
  double noise = params.value("state_noise", 0.1);
  double emit = params.value("emission_scale", 1.0);

  Rng rng = Rng::keyed(seed, 0x5b);
  LDSParams truth;
  // random rotation-like dynamics scaled to the requested spectral radius
  Mat raw(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) raw(i, j) = rng.normal();
  Eigen::JacobiSVD<Mat> svd(raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
  truth.A = rho * svd.matrixU() * svd.matrixV().transpose();
  truth.B = noise * Mat::Identity(D, D);
  truth.mu0 = Vec::Zero(D);
  truth.Sigma0 = Mat::Identity(D, D);
  truth.C = Mat(K - 1, D);
  for (int k = 0; k < K - 1; ++k)
    for (int d = 0; d < D; ++d) truth.C(k, d) = emit * rng.normal();

  IVec totals = IVec::Constant(T, per_step);
  IMat obs = sbmlds_generate(truth, totals, rng);
  std::vector<std::string> names;
  for (int k = 0; k < K; ++k) names.push_back("c" + std::to_string(k));
  write_count_csv(obs, names, require(out, "csv").get<std::string>());
  if (out.contains("truth")) {
    json tj;
    tj["A"] = matrix_to_json(truth.A);
    tj["B"] = matrix_to_json(truth.B);
    tj["C"] = matrix_to_json(truth.C);
    write_file(out.at("truth").get<std::string>(), tj.dump(2) + "\n");
  }
  log << "gen sbmlds: " << T << " steps, " << K << " categories\n";
}

void apply_thread_config(const json& config) {
  if (config.contains("threads") && !std::getenv("PGMULT_THREADS")) {
    static std::string holder;  // setenv keeps a pointer
    holder = std::to_string(config.at("threads").get<int>());
    setenv("PGMULT_THREADS", holder.c_str(), 0);
  }
}

}  // namespace

void run_config_file(const std::string& path, std::ostream& log) {
  json config = load_json(path);
  std::string model = require(config, "model").get<std::string>();
  if (model == "selfcheck") {
    if (!selfcheck(log)) throw Error("selfcheck failed");
    return;
  }
  require_seed(config);
  apply_thread_config(config);
  fs::path out_dir = prepare_output_dir(config);
  write_manifest(config, path, (out_dir / "manifest.json").string());

  if (model == "ctm" || model == "lda" || model == "ctm-svi")
    run_topic_model(config, out_dir, log);
  else if (model == "multgp")
    run_multgp(config, out_dir, log);
  else if (model == "sbmlds" || model == "rawlds")
    run_sequence_model(config, out_dir, log);
  else
    throw ConfigError("unknown model: " + model);
}

void gen_config_file(const std::string& path, std::ostream& log) {
  json config = load_json(path);
  std::string kind = require(config, "gen").get<std::string>();
  require_seed(config);
  if (kind == "ctm")
    gen_ctm(config, log);
  else if (kind == "sbmlds")
    gen_sbmlds(config, log);
  else
    throw ConfigError("unknown generator: " + kind);
}

}  // namespace pgmult
