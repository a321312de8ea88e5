#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "topicatlas/corpus.hpp"
#include "topicatlas/model.hpp"

namespace topicatlas {

/// Per-term document frequencies and pairwise co-document frequencies.
class DocFrequencyIndex {
 public:
  explicit DocFrequencyIndex(const Corpus& corpus);

  std::size_t doc_frequency(TermId term) const;
  std::size_t co_doc_frequency(TermId a, TermId b) const;

 private:
  std::vector<std::vector<DocIndex>> postings_;  // sorted document lists per term
};

struct CoherenceResult {
  double score = 0.0;
  std::size_t words_used = 0;
  std::size_t words_skipped = 0;  // D(v) = 0
};

/// sum_{m=2..M} sum_{l<m} log((D(v_m, v_l) + 1) / D(v_l)), words in rank order.
/// Throws ValidationError when fewer than two words occur in the corpus.
CoherenceResult topic_coherence(std::span<const TermId> top_words, const DocFrequencyIndex& index);
double topic_coherence(std::span<const TermId> top_words, const Corpus& corpus);

struct CoherenceReport {
  std::map<std::size_t, double> per_topic;
  double mean = 0.0;
  std::size_t top_words_used = 0;
};

CoherenceReport word_topic_coherence(const ModelParams& params, const Corpus& corpus, std::size_t m = 10);
CoherenceReport doc_topic_coherence(const ModelParams& params, const Corpus& corpus, std::size_t m = 10);
double doc_topic_coherence(const ModelParams& params, const Corpus& corpus, std::size_t doc_topic, std::size_t m);

struct TopicNumberSelection {
  std::size_t best = 0;
  std::map<std::size_t, double> mean_coherence;  // per candidate that trained successfully
  std::vector<std::size_t> failed;
};

/// Fits a text-only model per candidate K and keeps the highest mean WordTopic coherence
/// (ties go to the smaller K).
TopicNumberSelection select_topic_number(const Corpus& corpus, std::span<const std::size_t> candidates,
                                         const TrainConfig& config, std::size_t m = 10);

struct HeldoutLikelihood {
  double text = 0.0;
  double link = 0.0;
  std::size_t skipped_links = 0;
  double total() const { return text + link; }
};

/// Variational lower bound on test documents under frozen global parameters.
HeldoutLikelihood heldout_log_likelihood(const ModelParams& params, const Corpus& corpus,
                                         std::span<const DocIndex> test_docs, const TrainConfig& config);

struct FoldResult {
  std::size_t fold = 0;
  double text_loglik = 0.0;
  double link_loglik = 0.0;
  double total = 0.0;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
};

struct HeldoutReport {
  std::vector<FoldResult> per_fold;
  double mean_text = 0.0;
  double mean_link = 0.0;
  double mean_total = 0.0;
  std::size_t n_folds = 0;
};

HeldoutReport run_cv(const Corpus& corpus, const TrainConfig& config, std::size_t n_folds = 5,
                     std::uint64_t split_seed = 0);

}  // namespace topicatlas
