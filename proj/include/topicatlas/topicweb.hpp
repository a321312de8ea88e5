#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "topicatlas/corpus.hpp"
#include "topicatlas/matrix.hpp"
#include "topicatlas/model.hpp"

namespace topicatlas {

inline constexpr double kDefaultEdgePrior = 0.0002;
inline constexpr double kDefaultPruneThreshold = 1.0;
inline constexpr std::size_t kDefaultKeywords = 10;
inline constexpr std::size_t kDefaultTopDocuments = 5;
inline constexpr std::size_t kDefaultIndicativeWords = 10;

struct PosteriorStats {
  Matrix theta_hat;                      // D x K_w
  std::vector<double> p_word_topic;      // p(z = k | D)
  std::vector<double> p_doc_topic;       // p(z' = k' | D)
  Matrix word_soft_counts;               // D x K_w, expected #(v = i, z = k)
  std::vector<double> doc_soft_counts;   // expected #(z' = k')
};

/// theta_hat_ik = (c_ik + alpha_k) / sum_k* (c_ik* + alpha_k*), c_ik the expected word count of topic k.
Matrix posterior_theta(const TrainedModel& model);

/// Throws ValidationError when the model saw no link tokens (p(z'|D) undefined).
PosteriorStats posterior_stats(const TrainedModel& model);

Matrix word_word_strength(const PosteriorStats& stats, const ModelParams& params);
Matrix doc_doc_strength(const PosteriorStats& stats, const ModelParams& params);
Matrix word_doc_strength(const PosteriorStats& stats, const ModelParams& params);

struct RankedItem {
  std::size_t index;
  double score;
};

/// Top-m entries of `scores` by value, ties broken by lower index.
std::vector<RankedItem> top_n(const std::vector<double>& scores, std::size_t n);

std::vector<RankedItem> top_keywords(const ModelParams& params, std::size_t word_topic, std::size_t m);
std::vector<RankedItem> top_documents(const ModelParams& params, std::size_t doc_topic, std::size_t n);
/// Ranks words by E(w | z' = k') = sum_d omega_k'd * #(w, d).
std::vector<RankedItem> indicative_words(const ModelParams& params, const Corpus& corpus, std::size_t doc_topic,
                                         std::size_t m);

enum class NodeKind { kWord, kDoc };
enum class EdgeKind { kWordWord, kDocDoc, kWordDoc };

struct TopDoc {
  std::string doc;
  double weight = 0.0;
  friend bool operator==(const TopDoc&, const TopDoc&) = default;
};

struct TopicNode {
  NodeKind kind = NodeKind::kWord;
  std::size_t index = 0;
  double dominance = 0.0;
  std::vector<std::string> keywords;  // top words (WordTopic) or indicative words (DocTopic)
  std::vector<TopDoc> top_docs;       // DocTopic only

  std::string id() const;
  friend bool operator==(const TopicNode&, const TopicNode&) = default;
};

struct TopicEdge {
  EdgeKind kind = EdgeKind::kWordWord;
  std::string src;
  std::string dst;
  double cooccurrence = 0.0;
  double weight = 0.0;
  friend bool operator==(const TopicEdge&, const TopicEdge&) = default;
};

struct TopicWeb {
  std::size_t num_word_topics = 0;
  std::size_t num_doc_topics = 0;
  double prior = kDefaultEdgePrior;
  double threshold = kDefaultPruneThreshold;
  std::string model_hash;
  std::vector<TopicNode> nodes;
  std::vector<TopicEdge> edges;

  const TopicNode* find_node(const std::string& id) const;
  friend bool operator==(const TopicWeb&, const TopicWeb&) = default;
};

struct WebOptions {
  double prior = kDefaultEdgePrior;  // <= 0 selects 1 / (K_w * K_y)
  double threshold = kDefaultPruneThreshold;
  std::size_t keywords = kDefaultKeywords;
  std::size_t top_documents = kDefaultTopDocuments;
  std::size_t indicative_words = kDefaultIndicativeWords;
  std::string model_hash;
};

double edge_weight(double cooccurrence, double prior);

/// Nodes for every topic, edges for every distinct pair whose weight reaches the threshold.
/// Self-pairs of the Word-Word and Doc-Doc matrices are not emitted.
TopicWeb build_topic_web(const TrainedModel& model, const Corpus& corpus, const WebOptions& options = {});

}  // namespace topicatlas
