#include "topicatlas/topicweb.hpp"

#include <algorithm>
#include <numeric>

#include "topicatlas/error.hpp"

namespace topicatlas {

Matrix posterior_theta(const TrainedModel& model) {
  const ModelParams& p = model.params;
  const std::size_t kw = p.num_word_topics();
  Matrix theta(p.num_docs(), kw);
  for (std::size_t j = 0; j < model.doc_indices.size(); ++j) {
    const DocIndex i = model.doc_indices.at(j);
    std::copy(model.summaries.at(j).word_topic_counts.begin(), model.summaries.at(j).word_topic_counts.end(),
              theta.row(i).begin());
  }
  for (std::size_t i = 0; i < theta.rows(); ++i) {
    auto row = theta.row(i);
    double norm = 0.0;
    for (std::size_t k = 0; k < kw; ++k) {
      row[k] += p.alpha[k];
      norm += row[k];
    }
    for (double& t : row) t /= norm;
  }
  return theta;
}

PosteriorStats posterior_stats(const TrainedModel& model) {
  const ModelParams& p = model.params;
  const std::size_t d = p.num_docs();
  const std::size_t kw = p.num_word_topics();
  const std::size_t ky = p.num_doc_topics();
  if (model.summaries.size() != model.doc_indices.size())
    throw ValidationError("posterior_stats: document summaries do not match document indices");

  PosteriorStats s;
  s.word_soft_counts = Matrix(d, kw);
  s.doc_soft_counts.assign(ky, 0.0);
  for (std::size_t j = 0; j < model.doc_indices.size(); ++j) {
    const DocSummary& sum = model.summaries[j];
    auto row = s.word_soft_counts.row(model.doc_indices.at(j));
    std::copy(sum.word_topic_counts.begin(), sum.word_topic_counts.end(), row.begin());
    for (std::size_t c = 0; c < ky; ++c) s.doc_soft_counts[c] += sum.link_topic_counts[c];
  }

  s.theta_hat = posterior_theta(model);
  s.p_word_topic.assign(kw, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < kw; ++k) s.p_word_topic[k] += s.word_soft_counts(i, k);

  const double word_total = std::accumulate(s.p_word_topic.begin(), s.p_word_topic.end(), 0.0);
  if (!(word_total > 0.0)) throw ValidationError("posterior_stats: model has no word tokens");
  for (double& v : s.p_word_topic) v /= word_total;

  const double link_total = std::accumulate(s.doc_soft_counts.begin(), s.doc_soft_counts.end(), 0.0);
  if (!(link_total > 0.0))
    throw ValidationError(
        "posterior_stats: model saw no link tokens, so p(z'|D) is undefined; use a text-only analysis instead");
  s.p_doc_topic.resize(ky);
  for (std::size_t c = 0; c < ky; ++c) s.p_doc_topic[c] = s.doc_soft_counts[c] / link_total;
  return s;
}

Matrix word_word_strength(const PosteriorStats& stats, const ModelParams& params) {
  const std::size_t d = params.num_docs();
  const std::size_t kw = params.num_word_topics();
  const std::size_t ky = params.num_doc_topics();
  if (stats.theta_hat.rows() != d) throw ValidationError("word_word_strength: theta_hat has wrong row count");

  // p(v_i | D) = sum_k' p(z' = k' | D) * omega_k'i
  std::vector<double> doc_weight(d, 0.0);
  for (std::size_t c = 0; c < ky; ++c) {
    auto omega = params.omega.row(c);
    for (std::size_t i = 0; i < d; ++i) doc_weight[i] += stats.p_doc_topic[c] * omega[i];
  }

  Matrix out(kw, kw);
  const auto n = static_cast<std::ptrdiff_t>(kw);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t a = 0; a < n; ++a) {
    for (std::ptrdiff_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += doc_weight[i] * stats.theta_hat(i, a) * stats.theta_hat(i, b);
      out(a, b) = s;
      out(b, a) = s;
    }
  }
  return out;
}

Matrix doc_doc_strength(const PosteriorStats& stats, const ModelParams& params) {
  const std::size_t kw = params.num_word_topics();
  const std::size_t ky = params.num_doc_topics();
  Matrix out(ky, ky);
  for (std::size_t a = 0; a < ky; ++a) {
    for (std::size_t b = a; b < ky; ++b) {
      double s = 0.0;
      for (std::size_t k = 0; k < kw; ++k) s += stats.p_word_topic[k] * params.eta(k, a) * params.eta(k, b);
      out(a, b) = s;
      out(b, a) = s;
    }
  }
  return out;
}

Matrix word_doc_strength(const PosteriorStats& stats, const ModelParams& params) {
  const std::size_t kw = params.num_word_topics();
  const std::size_t ky = params.num_doc_topics();
  Matrix out(kw, ky);
  for (std::size_t k = 0; k < kw; ++k)
    for (std::size_t c = 0; c < ky; ++c) out(k, c) = params.eta(k, c) * stats.p_word_topic[k];
  return out;
}

std::vector<RankedItem> top_n(const std::vector<double>& scores, std::size_t n) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t m = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
  std::vector<RankedItem> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back({order[i], scores[order[i]]});
  return out;
}

std::vector<RankedItem> top_keywords(const ModelParams& params, std::size_t word_topic, std::size_t m) {
  if (word_topic >= params.num_word_topics()) throw ValidationError("top_keywords: topic index out of range");
  auto row = params.beta.row(word_topic);
  return top_n(std::vector<double>(row.begin(), row.end()), m);
}

std::vector<RankedItem> top_documents(const ModelParams& params, std::size_t doc_topic, std::size_t n) {
  if (doc_topic >= params.num_doc_topics()) throw ValidationError("top_documents: topic index out of range");
  auto row = params.omega.row(doc_topic);
  return top_n(std::vector<double>(row.begin(), row.end()), n);
}

std::vector<RankedItem> indicative_words(const ModelParams& params, const Corpus& corpus, std::size_t doc_topic,
                                         std::size_t m) {
  if (doc_topic >= params.num_doc_topics()) throw ValidationError("indicative_words: topic index out of range");
  if (m < 1) throw ValidationError("indicative_words: m must be >= 1");
  if (corpus.num_docs() != params.num_docs() || corpus.vocab_size() != params.vocab_size())
    throw ValidationError("indicative_words: corpus does not match model dimensions");
  std::vector<double> expectancy(corpus.vocab_size(), 0.0);
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const double w = params.omega(doc_topic, d);
    for (TermId t : corpus.doc(d).word_tokens) expectancy[t] += w;
  }
  return top_n(expectancy, m);
}

std::string TopicNode::id() const { return (kind == NodeKind::kWord ? "w" : "d") + std::to_string(index); }

const TopicNode* TopicWeb::find_node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id() == id) return &n;
  return nullptr;
}

double edge_weight(double cooccurrence, double prior) {
  if (!(prior > 0.0)) throw ValidationError("edge prior must be positive");
  return cooccurrence / prior;
}

TopicWeb build_topic_web(const TrainedModel& model, const Corpus& corpus, const WebOptions& options) {
  const ModelParams& p = model.params;
  const std::size_t kw = p.num_word_topics();
  const std::size_t ky = p.num_doc_topics();
  const PosteriorStats stats = posterior_stats(model);

  TopicWeb web;
  web.num_word_topics = kw;
  web.num_doc_topics = ky;
  web.prior = options.prior > 0.0 ? options.prior : 1.0 / static_cast<double>(kw * ky);
  web.threshold = options.threshold;
  web.model_hash = options.model_hash;

  for (std::size_t k = 0; k < kw; ++k) {
    TopicNode node{NodeKind::kWord, k, stats.p_word_topic[k], {}, {}};
    for (const auto& item : top_keywords(p, k, options.keywords))
      node.keywords.push_back(corpus.vocabulary().term(static_cast<TermId>(item.index)));
    web.nodes.push_back(std::move(node));
  }
  for (std::size_t c = 0; c < ky; ++c) {
    TopicNode node{NodeKind::kDoc, c, stats.p_doc_topic[c], {}, {}};
    for (const auto& item : indicative_words(p, corpus, c, options.indicative_words))
      node.keywords.push_back(corpus.vocabulary().term(static_cast<TermId>(item.index)));
    for (const auto& item : top_documents(p, c, options.top_documents))
      node.top_docs.push_back({corpus.doc(item.index).id, item.score});
    web.nodes.push_back(std::move(node));
  }

  auto emit = [&](EdgeKind kind, std::string src, std::string dst, double co) {
    const double w = edge_weight(co, web.prior);
    if (w >= web.threshold) web.edges.push_back({kind, std::move(src), std::move(dst), co, w});
  };
  const Matrix ww = word_word_strength(stats, p);
  for (std::size_t a = 0; a < kw; ++a)
    for (std::size_t b = a + 1; b < kw; ++b) emit(EdgeKind::kWordWord, "w" + std::to_string(a), "w" + std::to_string(b), ww(a, b));
  const Matrix dd = doc_doc_strength(stats, p);
  for (std::size_t a = 0; a < ky; ++a)
    for (std::size_t b = a + 1; b < ky; ++b) emit(EdgeKind::kDocDoc, "d" + std::to_string(a), "d" + std::to_string(b), dd(a, b));
  const Matrix wd = word_doc_strength(stats, p);
  for (std::size_t k = 0; k < kw; ++k)
    for (std::size_t c = 0; c < ky; ++c) emit(EdgeKind::kWordDoc, "w" + std::to_string(k), "d" + std::to_string(c), wd(k, c));
  return web;
}

}  // namespace topicatlas
