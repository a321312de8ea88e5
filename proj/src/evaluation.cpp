#include "topicatlas/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <iterator>

#include "topicatlas/error.hpp"
#include "topicatlas/inference.hpp"
#include "topicatlas/topicweb.hpp"

namespace topicatlas {

DocFrequencyIndex::DocFrequencyIndex(const Corpus& corpus) : postings_(corpus.vocab_size()) {
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (TermId t : corpus.doc(d).word_tokens) {
      auto& list = postings_[t];
      if (list.empty() || list.back() != d) list.push_back(static_cast<DocIndex>(d));
    }
  }
}

std::size_t DocFrequencyIndex::doc_frequency(TermId term) const {
  return term < postings_.size() ? postings_[term].size() : 0;
}

std::size_t DocFrequencyIndex::co_doc_frequency(TermId a, TermId b) const {
  if (a >= postings_.size() || b >= postings_.size()) return 0;
  const auto& x = postings_[a];
  const auto& y = postings_[b];
  std::size_t n = 0;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

CoherenceResult topic_coherence(std::span<const TermId> top_words, const DocFrequencyIndex& index) {
  CoherenceResult res;
  std::vector<TermId> words;
  for (TermId w : top_words) {
    if (index.doc_frequency(w) == 0)
      ++res.words_skipped;
    else
      words.push_back(w);
  }
  if (words.size() < 2) throw ValidationError("topic_coherence: fewer than two top words occur in the corpus");
  if (res.words_skipped > 0)
    std::cerr << "warning: topic_coherence skipped " << res.words_skipped << " word(s) absent from the corpus\n";
  double score = 0.0;
  for (std::size_t m = 1; m < words.size(); ++m) {
    for (std::size_t l = 0; l < m; ++l) {
      const double co = static_cast<double>(index.co_doc_frequency(words[m], words[l]));
      score += std::log((co + 1.0) / static_cast<double>(index.doc_frequency(words[l])));
    }
  }
  res.score = score;
  res.words_used = words.size();
  return res;
}

double topic_coherence(std::span<const TermId> top_words, const Corpus& corpus) {
  return topic_coherence(top_words, DocFrequencyIndex(corpus)).score;
}

namespace {

std::vector<TermId> as_terms(const std::vector<RankedItem>& items) {
  std::vector<TermId> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(static_cast<TermId>(it.index));
  return out;
}

CoherenceReport report_from(std::map<std::size_t, double> scores, std::size_t m) {
  CoherenceReport r;
  r.per_topic = std::move(scores);
  r.top_words_used = m;
  double sum = 0.0;
  for (const auto& [_, s] : r.per_topic) sum += s;
  r.mean = r.per_topic.empty() ? 0.0 : sum / static_cast<double>(r.per_topic.size());
  return r;
}

}  // namespace

CoherenceReport word_topic_coherence(const ModelParams& params, const Corpus& corpus, std::size_t m) {
  const DocFrequencyIndex index(corpus);
  std::map<std::size_t, double> scores;
  for (std::size_t k = 0; k < params.num_word_topics(); ++k)
    scores[k] = topic_coherence(as_terms(top_keywords(params, k, m)), index).score;
  return report_from(std::move(scores), m);
}

CoherenceReport doc_topic_coherence(const ModelParams& params, const Corpus& corpus, std::size_t m) {
  const DocFrequencyIndex index(corpus);
  std::map<std::size_t, double> scores;
  for (std::size_t c = 0; c < params.num_doc_topics(); ++c)
    scores[c] = topic_coherence(as_terms(indicative_words(params, corpus, c, m)), index).score;
  return report_from(std::move(scores), m);
}

double doc_topic_coherence(const ModelParams& params, const Corpus& corpus, std::size_t doc_topic, std::size_t m) {
  return topic_coherence(as_terms(indicative_words(params, corpus, doc_topic, m)), corpus);
}

TopicNumberSelection select_topic_number(const Corpus& corpus, std::span<const std::size_t> candidates,
                                         const TrainConfig& config, std::size_t m) {
  if (candidates.empty()) throw ValidationError("select_topic_number: no candidates");
  const Corpus text_only = corpus.without_links();
  TopicNumberSelection sel;
  bool have_best = false;
  double best_score = 0.0;
  for (std::size_t k : candidates) {
    TrainConfig cfg = config;
    cfg.num_word_topics = k;
    cfg.num_doc_topics = k;
    try {
      const TrainedModel model = train(text_only, cfg);
      const double score = word_topic_coherence(model.params, text_only, m).mean;
      sel.mean_coherence[k] = score;
      if (!have_best || score > best_score || (score == best_score && k < sel.best)) {
        have_best = true;
        best_score = score;
        sel.best = k;
      }
    } catch (const Error& e) {
      std::cerr << "warning: topic number " << k << " skipped: " << e.what() << "\n";
      sel.failed.push_back(k);
    }
  }
  if (!have_best) throw Error("select_topic_number: every candidate failed");
  return sel;
}

HeldoutLikelihood heldout_log_likelihood(const ModelParams& params, const Corpus& corpus,
                                         std::span<const DocIndex> test_docs, const TrainConfig& config) {
  if (test_docs.empty()) throw ValidationError("heldout_log_likelihood: empty test set");
  const LogParams logs(params);
  const std::size_t support = params.num_docs();
  std::vector<ElboParts> parts(test_docs.size());
  std::vector<std::size_t> skipped(test_docs.size(), 0);

  const auto n = static_cast<std::ptrdiff_t>(test_docs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    try {
      Document doc = corpus.doc(test_docs[j]);
      for (TermId w : doc.word_tokens)
        if (w >= params.vocab_size()) throw ValidationError("heldout_log_likelihood: word index outside model vocabulary");
      const auto before = doc.link_tokens.size();
      std::erase_if(doc.link_tokens, [&](DocIndex t) { return t >= support; });
      skipped[j] = before - doc.link_tokens.size();
      parts[j] = e_step_document(doc, params, logs, config).elbo;
    } catch (...) {
#pragma omp critical(topicatlas_heldout_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  HeldoutLikelihood out;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    out.text += parts[j].text;
    out.link += parts[j].link;
    out.skipped_links += skipped[j];
  }
  return out;
}

HeldoutReport run_cv(const Corpus& corpus, const TrainConfig& config, std::size_t n_folds, std::uint64_t split_seed) {
  const FoldAssignment folds = split_folds(corpus, n_folds, split_seed);
  HeldoutReport report;
  report.n_folds = n_folds;
  for (std::size_t f = 0; f < n_folds; ++f) {
    const std::vector<DocIndex> test = folds.members(f);
    const std::vector<DocIndex> train_docs = folds.complement(f);
    std::vector<DocIndex> overlap;
    std::set_intersection(test.begin(), test.end(), train_docs.begin(), train_docs.end(), std::back_inserter(overlap));
    if (!overlap.empty()) throw ValidationError("run_cv: training and test folds overlap");

    const TrainedModel model = train(corpus, config, train_docs);
    const HeldoutLikelihood ll = heldout_log_likelihood(model.params, corpus, test, config);
    report.per_fold.push_back({f, ll.text, ll.link, ll.total(), train_docs.size(), test.size()});
  }
  for (const auto& r : report.per_fold) {
    report.mean_text += r.text_loglik;
    report.mean_link += r.link_loglik;
    report.mean_total += r.total;
  }
  const double nf = static_cast<double>(report.per_fold.size());
  report.mean_text /= nf;
  report.mean_link /= nf;
  report.mean_total /= nf;
  return report;
}

}  // namespace topicatlas
