#include "pgmult/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace pgmult {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << contents;
}

Corpus read_corpus(const std::string& path, int vocab_size) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus: " + path);
  Corpus corpus;
  int max_id = -1;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<int> doc;
    long id;
    while (ls >> id) {
      if (id < 0) throw DataError("corpus token id must be nonnegative: " + path);
      doc.push_back(static_cast<int>(id));
      max_id = std::max(max_id, static_cast<int>(id));
    }
    corpus.docs.push_back(std::move(doc));
  }
  corpus.vocab_size = vocab_size > 0 ? vocab_size : max_id + 1;
  if (max_id >= corpus.vocab_size)
    throw DataError("corpus token id exceeds vocabulary size: " + path);
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus: " + path);
  for (const auto& doc : corpus.docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (i) out << ' ';
      out << doc[i];
    }
    out << '\n';
  }
}

std::vector<std::string> read_vocab(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary: " + path);
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) vocab.push_back(line);
  return vocab;
}

void write_vocab(const std::vector<std::string>& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write vocabulary: " + path);
  for (const auto& w : vocab) out << w << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

GPCountCSV read_gp_csv(const std::string& path, int n_input_cols) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open csv: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty csv: " + path);
  std::vector<std::string> header = split_csv_line(line);
  const int cols = static_cast<int>(header.size());
  if (n_input_cols < 0 || n_input_cols >= cols)
    throw DataError("csv input column count out of range: " + path);

  GPCountCSV data;
  data.input_names.assign(header.begin(), header.begin() + n_input_cols);
  data.category_names.assign(header.begin() + n_input_cols, header.end());

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != cols)
      throw DataError("ragged csv row in " + path);
    rows.push_back(std::move(fields));
  }
  const int m = static_cast<int>(rows.size());
  const int k = cols - n_input_cols;
  data.inputs = Mat(m, n_input_cols);
  data.counts = IMat(m, k);
  try {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n_input_cols; ++j)
        data.inputs(i, j) = std::stod(rows[i][j]);
      for (int j = 0; j < k; ++j) {
        long v = std::stol(rows[i][n_input_cols + j]);
        if (v < 0) throw DataError("negative count in " + path);
        data.counts(i, j) = static_cast<int>(v);
      }
    }
  } catch (const std::invalid_argument&) {
    throw DataError("malformed numeric field in " + path);
  } catch (const std::out_of_range&) {
    throw DataError("numeric field out of range in " + path);
  }
  return data;
}

void write_gp_csv(const GPCountCSV& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write csv: " + path);
  bool first = true;
  for (const auto& n : data.input_names) {
    out << (first ? "" : ",") << n;
    first = false;
  }
  for (const auto& n : data.category_names) {
    out << (first ? "" : ",") << n;
    first = false;
  }
  out << '\n';
  for (int i = 0; i < data.inputs.rows(); ++i) {
    first = true;
    for (int j = 0; j < data.inputs.cols(); ++j) {
      out << (first ? "" : ",") << data.inputs(i, j);
      first = false;
    }
    for (int j = 0; j < data.counts.cols(); ++j) {
      out << (first ? "" : ",") << data.counts(i, j);
      first = false;
    }
    out << '\n';
  }
}

IMat read_count_csv(const std::string& path, std::vector<std::string>* names) {
  GPCountCSV data = read_gp_csv(path, 0);
  if (names) *names = data.category_names;
  return data.counts;
}

void write_count_csv(const IMat& counts, const std::vector<std::string>& names,
                     const std::string& path) {
  GPCountCSV data;
  data.inputs = Mat(counts.rows(), 0);
  data.counts = counts;
  data.category_names = names;
  if (data.category_names.empty())
    for (int k = 0; k < counts.cols(); ++k)
      data.category_names.push_back("c" + std::to_string(k));
  write_gp_csv(data, path);
}

std::vector<std::string> tokenize_text(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'') {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

EncodedText encode_text(const std::vector<std::string>& words, int max_vocab) {
  if (max_vocab < 2) throw ParameterError("encode_text: max_vocab must be >= 2");
  std::map<std::string, long> freq;
  for (const auto& w : words) ++freq[w];
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  EncodedText out;
  std::map<std::string, int> id_of;
  int keep = std::min<int>(max_vocab - 1, static_cast<int>(ranked.size()));
  for (int i = 0; i < keep; ++i) {
    id_of[ranked[i].first] = i;
    out.vocab.push_back(ranked[i].first);
  }
  int unk = static_cast<int>(out.vocab.size());
  out.vocab.push_back("<unk>");
  out.tokens.reserve(words.size());
  for (const auto& w : words) {
    auto it = id_of.find(w);
    out.tokens.push_back(it == id_of.end() ? unk : it->second);
  }
  return out;
}

IMat one_hot_rows(const std::vector<int>& tokens, int K) {
  IMat rows = IMat::Zero(static_cast<int>(tokens.size()), K);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (tokens[t] < 0 || tokens[t] >= K)
      throw DataError("one_hot_rows: token id out of range");
    rows(static_cast<int>(t), tokens[t]) = 1;
  }
  return rows;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace pgmult
