#pragma once

#include <string>
#include <vector>

#include "pgmult/ctm.hpp"
#include "pgmult/types.hpp"

namespace pgmult {

// Corpus files are newline-delimited records, each a whitespace-separated
// list of integer token ids; the sidecar vocabulary maps id -> string, one
// entry per line.
Corpus read_corpus(const std::string& path, int vocab_size = -1);
void write_corpus(const Corpus& corpus, const std::string& path);
std::vector<std::string> read_vocab(const std::string& path);
void write_vocab(const std::vector<std::string>& vocab, const std::string& path);

// CSV of input columns followed by count columns; the header names the
// categories. The caller says how many leading columns are inputs.
struct GPCountCSV {
  Mat inputs;
  IMat counts;
  std::vector<std::string> input_names;
  std::vector<std::string> category_names;
};
GPCountCSV read_gp_csv(const std::string& path, int n_input_cols);
void write_gp_csv(const GPCountCSV& data, const std::string& path);

// Plain T x K count matrix CSV with a header of category names.
IMat read_count_csv(const std::string& path, std::vector<std::string>* names = nullptr);
void write_count_csv(const IMat& counts, const std::vector<std::string>& names,
                     const std::string& path);

// Lowercased alphabetic tokenization.
std::vector<std::string> tokenize_text(const std::string& text);

// Frequency-capped encoding: the max_vocab - 1 most frequent words keep their
// own ids (descending frequency, ties lexicographic), everything else maps to
// a trailing <unk> id.
struct EncodedText {
  std::vector<int> tokens;
  std::vector<std::string> vocab;
};
EncodedText encode_text(const std::vector<std::string>& words, int max_vocab);

IMat one_hot_rows(const std::vector<int>& tokens, int K);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// FNV-1a, used for the reproduction manifest's config hash.
std::string fnv1a_hex(const std::string& data);

}  // namespace pgmult
