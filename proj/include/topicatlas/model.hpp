#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topicatlas/corpus.hpp"
#include "topicatlas/matrix.hpp"

namespace topicatlas {

enum class ExecutionMode {
  kSerial,    // reference kernels, one document at a time
  kParallel,  // OpenMP over documents; reductions keep a fixed document order
};

struct TrainConfig {
  std::size_t num_word_topics = 70;
  std::size_t num_doc_topics = 70;
  double alpha_init = 0.01;
  double inner_tol = 1e-9;
  int inner_max_iters = 100;
  double outer_tol = 1e-4;
  int outer_max_iters = 50;
  double smoothing_eps = 1e-10;
  std::uint64_t seed = 0;
  bool update_alpha = true;
  // When false every document is treated as if it had no link tokens.
  bool use_links = true;
  // Start each outer iteration's E-step from the previous iteration's variational parameters.
  // Fresh starts (gamma = alpha + (N+L)/K_w, uniform responsibilities) can land the fixed point in a
  // worse local optimum and break ELBO monotonicity across EM iterations.
  bool warm_start = true;
  ExecutionMode mode = ExecutionMode::kParallel;

  /// Throws ValidationError for non-positive tolerances, iteration caps or dimensions.
  void validate() const;
};

/// Global parameters. beta: K_w x V, eta: K_w x K_y, omega: K_y x D; all row-stochastic.
struct ModelParams {
  std::vector<double> alpha;
  Matrix beta;
  Matrix eta;
  Matrix omega;

  std::size_t num_word_topics() const { return alpha.size(); }
  std::size_t num_doc_topics() const { return eta.cols(); }
  std::size_t vocab_size() const { return beta.cols(); }
  std::size_t num_docs() const { return omega.cols(); }

  /// Checks shapes, positivity and row sums (within `tol`). Throws ValidationError.
  /// Zero entries are accepted when `strictly_positive` is false (simulation parameters).
  void validate(double tol = 1e-9, bool strictly_positive = true) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Element-wise logs of beta, eta and omega, computed once per sweep.
struct LogParams {
  Matrix log_beta;
  Matrix log_eta;
  Matrix log_omega;

  explicit LogParams(const ModelParams& params);
};

/// Per-document variational parameters. phi: N_i x K_w, lambda: L_i x K_w, sigma: L_i x K_y.
struct DocVariational {
  std::vector<double> gamma;
  Matrix phi;
  Matrix lambda;
  Matrix sigma;

  friend bool operator==(const DocVariational&, const DocVariational&) = default;
};

/// What survives a checkpoint: per-document expected counts instead of full responsibilities.
struct DocSummary {
  std::vector<double> gamma;
  std::vector<double> word_topic_counts;  // sum_n phi_nk
  std::vector<double> link_topic_counts;  // sum_l sigma_lk'

  friend bool operator==(const DocSummary&, const DocSummary&) = default;
};

DocSummary summarize(const DocVariational& var);

/// Random initialization: alpha = alpha_init, rows of beta/eta/omega uniform(0,1) then normalized.
ModelParams init_model(std::size_t vocab_size, std::size_t num_docs, const TrainConfig& config);
ModelParams init_model(const Corpus& corpus, const TrainConfig& config);

struct TrainedModel {
  ModelParams params;
  TrainConfig config;
  std::vector<DocIndex> doc_indices;       // training documents, in corpus order
  std::vector<DocSummary> summaries;       // parallel to doc_indices
  std::vector<DocVariational> per_doc;     // parallel to doc_indices; empty after loading a checkpoint
  std::vector<double> elbo_trace;
  std::uint64_t corpus_hash = 0;
  bool alpha_warning = false;              // some Newton-Raphson update hit its step cap
};

}  // namespace topicatlas
