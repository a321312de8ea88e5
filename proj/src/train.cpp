#include <cmath>
#include <numeric>
#include <string>

#include "topicatlas/error.hpp"
#include "topicatlas/inference.hpp"

namespace topicatlas {

TrainedModel train(const Corpus& corpus, const TrainConfig& config, std::span<const DocIndex> doc_indices,
                   const IterationObserver& observer) {
  config.validate();
  if (corpus.num_docs() == 0) throw ValidationError("train: corpus is empty");

  TrainedModel model;
  model.config = config;
  if (doc_indices.empty()) {
    model.doc_indices.resize(corpus.num_docs());
    std::iota(model.doc_indices.begin(), model.doc_indices.end(), DocIndex{0});
  } else {
    model.doc_indices.assign(doc_indices.begin(), doc_indices.end());
    for (DocIndex i : model.doc_indices)
      if (i >= corpus.num_docs()) throw ValidationError("train: document index out of range");
  }
  model.corpus_hash = corpus_hash(corpus);
  model.params = init_model(corpus, config);

  const bool parallel = config.mode == ExecutionMode::kParallel;
  std::vector<DocEStep> results;
  SuffStats stats(config.num_word_topics, config.num_doc_topics, corpus.vocab_size(), corpus.num_docs());

  for (int it = 1; it <= config.outer_max_iters; ++it) {
    ModelParams next;
    try {
      if (parallel)
        estep_sweep_parallel(corpus, model.doc_indices, model.params, config, results);
      else
        estep_sweep_serial(corpus, model.doc_indices, model.params, config, results);
      stats.clear();
      if (parallel)
        accumulate_parallel(corpus, model.doc_indices, results, stats);
      else
        accumulate_serial(corpus, model.doc_indices, results, stats);
      bool warn = false;
      next = m_step(stats, model.params.alpha, config, &warn);
      model.alpha_warning = model.alpha_warning || warn;
    } catch (const NumericalError& e) {
      throw NumericalError("outer iteration " + std::to_string(it) + ": " + e.what());
    }

    const double elbo = stats.elbo_sum;
    if (observer) observer(IterationState{it, elbo, &model.params, &next, results});
    model.params = std::move(next);
    model.elbo_trace.push_back(elbo);

    if (it > 1) {
      const double previous = model.elbo_trace[model.elbo_trace.size() - 2];
      if ((elbo - previous) / std::abs(previous) < config.outer_tol) break;
    }
  }

  model.per_doc.reserve(results.size());
  model.summaries.reserve(results.size());
  for (auto& r : results) {
    model.summaries.push_back(summarize(r.var));
    model.per_doc.push_back(std::move(r.var));
  }
  return model;
}

}  // namespace topicatlas
