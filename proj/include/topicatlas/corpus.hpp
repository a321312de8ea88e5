#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topicatlas {

using TermId = std::uint32_t;
using DocIndex = std::uint32_t;

struct Document {
  std::string id;
  std::vector<TermId> word_tokens;
  std::vector<DocIndex> link_tokens;  // bag of links; positions in the owning corpus
  std::string snippet;                // first 200 characters of the source text

  friend bool operator==(const Document&, const Document&) = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws ValidationError on duplicate terms.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const { return terms_.size(); }
  const std::string& term(TermId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<TermId> find(std::string_view term) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> index_;
};

class Corpus {
 public:
  Corpus() = default;
  /// Validates token ranges and id uniqueness.
  Corpus(std::vector<Document> documents, Vocabulary vocabulary);

  std::size_t num_docs() const { return documents_.size(); }
  std::size_t vocab_size() const { return vocabulary_.size(); }
  const std::vector<Document>& documents() const { return documents_; }
  const Document& doc(std::size_t i) const { return documents_.at(i); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  std::optional<DocIndex> find(std::string_view id) const;

  std::size_t total_word_tokens() const;
  std::size_t total_link_tokens() const;

  /// Same documents and vocabulary with every link token removed.
  Corpus without_links() const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents_ == b.documents_ && a.vocabulary_ == b.vocabulary_;
  }

 private:
  std::vector<Document> documents_;
  Vocabulary vocabulary_;
  std::unordered_map<std::string, DocIndex> id_index_;
};

struct IngestOptions {
  std::size_t min_count = 5;
  std::unordered_set<std::string> stopwords;
  // String `text` fields are split on whitespace unless this is set, in which case
  // they are lowercased and split on non-alphanumeric characters.
  bool tokenize_raw = false;
};

struct IngestStats {
  std::size_t records = 0;
  std::size_t dropped_unknown_links = 0;
  std::size_t dropped_self_links = 0;
  std::size_t dropped_oov_tokens = 0;
};

/// Lowercase and split on anything that is not an ASCII letter or digit.
std::vector<std::string> tokenize(std::string_view text);

/// Terms with frequency >= min_count that are not stopwords, sorted lexicographically.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs, std::size_t min_count,
                            const std::unordered_set<std::string>& stopwords);

/// Reads line-delimited JSON records {"id", "text", "links"}. Blank lines are skipped.
Corpus ingest_corpus(std::istream& in, const IngestOptions& options, IngestStats* stats = nullptr);

/// Keeps documents with at least `min_links` link tokens, dropping links into removed
/// documents, until no further document falls below the threshold.
Corpus filter_by_link_count(const Corpus& corpus, std::size_t min_links);

struct FoldAssignment {
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // document index -> fold id

  std::vector<DocIndex> members(std::size_t fold) const;
  std::vector<DocIndex> complement(std::size_t fold) const;
};

FoldAssignment split_folds(const Corpus& corpus, std::size_t n_folds, std::uint64_t seed);

// Interchange dump: a magic header line followed by JSON lines.
inline constexpr std::string_view kCorpusMagic = "#topicatlas-corpus v1";

void write_corpus(std::ostream& out, const Corpus& corpus);
Corpus read_corpus(std::istream& in);
std::string serialize_corpus(const Corpus& corpus);
std::uint64_t corpus_hash(const Corpus& corpus);

/// Loads either a corpus dump (detected by its magic header) or a JSONL record file.
Corpus load_corpus_file(const std::string& path, const IngestOptions& options,
                        IngestStats* stats = nullptr);

}  // namespace topicatlas
