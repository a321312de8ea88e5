#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "topicatlas/corpus.hpp"
#include "topicatlas/generate.hpp"
#include "topicatlas/model.hpp"

namespace testsupport {

using namespace topicatlas;

inline Document make_doc(std::string id, std::vector<TermId> words, std::vector<DocIndex> links = {}) {
  return Document{std::move(id), std::move(words), std::move(links), ""};
}

inline Vocabulary vocab_of(std::size_t v) {
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < v; ++i) terms.push_back("t" + std::to_string(i));
  return Vocabulary(terms);
}

inline Matrix matrix_of(std::vector<std::vector<double>> rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

inline double row_sum(std::span<const double> row) { return std::accumulate(row.begin(), row.end(), 0.0); }

inline double max_row_error(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) worst = std::max(worst, std::abs(row_sum(m.row(r)) - 1.0));
  return worst;
}

// Ground truth used for synthetic fits. eta is diagonally dominant: the link side only identifies
// the product eta * omega, so a transition matrix that sends two WordTopics to the same DocTopic
// would leave omega unrecoverable no matter how good the fit is.
struct Synthetic {
  ModelParams truth;
  Corpus corpus;
};

inline Synthetic synthetic_network(std::uint64_t seed, std::size_t words_per_doc = 200,
                                   std::size_t links_per_doc = 20) {
  constexpr std::size_t kTopics = 3, kVocab = 30, kDocs = 60;
  Synthetic s;
  s.truth = random_params(kTopics, kTopics, kVocab, kDocs, 0.1, 0.1, seed);
  for (std::size_t a = 0; a < kTopics; ++a)
    for (std::size_t b = 0; b < kTopics; ++b) s.truth.eta(a, b) = a == b ? 0.8 : 0.1;
  const std::vector<std::size_t> lengths(kDocs, words_per_doc), links(kDocs, links_per_doc);
  s.corpus = generate_corpus(s.truth, lengths, links, seed + 100);
  return s;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

// Worst per-row cosine under the row permutation that maximizes it.
inline double matched_cosine(const Matrix& truth, const Matrix& fit) {
  std::vector<std::size_t> perm(truth.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -1.0;
  do {
    double worst = 2.0;
    for (std::size_t r = 0; r < perm.size(); ++r) worst = std::min(worst, cosine(truth.row(r), fit.row(perm[r])));
    best = std::max(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("topicatlas-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

// JSONL records for a corpus: whitespace-joined term strings and link ids.
inline std::string to_jsonl(const Corpus& c) {
  std::ostringstream os;
  for (const auto& d : c.documents()) {
    os << "{\"id\":\"" << d.id << "\",\"text\":\"";
    for (std::size_t n = 0; n < d.word_tokens.size(); ++n)
      os << (n ? " " : "") << c.vocabulary().term(d.word_tokens[n]);
    os << "\",\"links\":[";
    for (std::size_t l = 0; l < d.link_tokens.size(); ++l)
      os << (l ? "," : "") << '"' << c.doc(d.link_tokens[l]).id << '"';
    os << "]}\n";
  }
  return os.str();
}

}  // namespace testsupport
