#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "topicatlas/corpus.hpp"
#include "topicatlas/model.hpp"

namespace topicatlas {

/// ELBO of one document split into the text side (Dirichlet + word terms) and the link side.
struct ElboParts {
  double text = 0.0;
  double link = 0.0;
  double total() const { return text + link; }
};

struct DocEStep {
  DocVariational var;
  ElboParts elbo;
  int sweeps = 0;
  std::vector<double> sweep_elbos;  // document ELBO after each full update sweep
};

/// Coordinate-ascent fixed point for one document under frozen global parameters. Starts from
/// `init` when given (and shaped for this document), otherwise from the fresh initialization.
DocEStep e_step_document(const Document& doc, const ModelParams& params, const LogParams& logs,
                         const TrainConfig& config, const DocVariational* init = nullptr);
DocEStep e_step_document(const Document& doc, const ModelParams& params, const TrainConfig& config);

ElboParts document_elbo(const Document& doc, const ModelParams& params, const LogParams& logs,
                        const DocVariational& var, bool use_links = true);

/// Sum of document ELBOs; `per_doc[j]` belongs to `corpus.doc(doc_indices[j])`.
double compute_elbo(const Corpus& corpus, const ModelParams& params, std::span<const DocIndex> doc_indices,
                    std::span<const DocVariational> per_doc, bool use_links = true);
double compute_elbo(const Corpus& corpus, const ModelParams& params, std::span<const DocVariational> per_doc);

// Variational updates exposed for tests; each writes one row (or gamma) from current state.
namespace updates {
void phi_row(std::span<double> phi_row, std::span<const double> digamma_gamma, const Matrix& log_beta,
             TermId word);
void gamma(std::span<double> gamma, std::span<const double> alpha, const DocVariational& var);
void lambda_row(std::span<double> lambda_row, std::span<const double> digamma_gamma,
                std::span<const double> sigma_row, const Matrix& log_eta);
void sigma_row(std::span<double> sigma_row, std::span<const double> lambda_row, const Matrix& log_eta,
               const Matrix& log_omega, DocIndex target);
}  // namespace updates

struct SuffStats {
  Matrix beta_counts;                   // K_w x V
  Matrix eta_counts;                    // K_w x K_y
  Matrix omega_counts;                  // K_y x D
  std::vector<double> gamma_log_sums;   // sum_i (digamma(gamma_ik) - digamma(sum_k gamma_ik))
  std::size_t num_docs = 0;
  double elbo_sum = 0.0;

  SuffStats() = default;
  SuffStats(std::size_t num_word_topics, std::size_t num_doc_topics, std::size_t vocab_size,
            std::size_t corpus_docs);

  void clear();
  void add(const Document& doc, const DocVariational& var);
};

struct AlphaUpdate {
  std::vector<double> alpha;
  int iterations = 0;
  bool converged = true;
};

/// Newton-Raphson on the alpha terms of the ELBO, D * (lgamma(sum a) - sum lgamma(a_k)) + sum (a_k - 1) s_k,
/// with the diagonal-plus-rank-one Hessian. Steps are halved until alpha stays positive and the objective
/// does not decrease.
AlphaUpdate update_alpha(std::span<const double> gamma_log_sums, std::span<const double> alpha,
                         std::size_t num_docs, int max_iters = 100, double grad_tol = 1e-10);

double alpha_objective(std::span<const double> gamma_log_sums, std::span<const double> alpha,
                       std::size_t num_docs);

/// Row-normalizes the accumulated counts (after adding smoothing_eps to every cell) and, when
/// configured, updates alpha. `alpha_warning` is set if the alpha update hit its cap.
ModelParams m_step(const SuffStats& stats, std::span<const double> alpha, const TrainConfig& config,
                   bool* alpha_warning = nullptr);

// Sweep kernels. The serial versions are the reference; the parallel versions must agree bitwise.
// With config.warm_start, entries already present in `out` seed the next fixed point.
void estep_sweep_serial(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                        const ModelParams& params, const TrainConfig& config, std::vector<DocEStep>& out);
void estep_sweep_parallel(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                          const ModelParams& params, const TrainConfig& config, std::vector<DocEStep>& out);
void accumulate_serial(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                       std::span<const DocEStep> results, SuffStats& stats);
void accumulate_parallel(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                         std::span<const DocEStep> results, SuffStats& stats);

struct IterationState {
  int iteration = 0;                             // 1-based outer iteration
  double elbo = 0.0;                             // ELBO of the E-step just completed
  const ModelParams* before = nullptr;           // params the E-step used
  const ModelParams* after = nullptr;            // params produced by the M-step
  std::span<const DocEStep> estep;
};

using IterationObserver = std::function<void(const IterationState&)>;

/// Variational EM. `doc_indices` selects the training documents (all documents when empty);
/// omega always spans the whole corpus so held-out documents stay valid link targets.
TrainedModel train(const Corpus& corpus, const TrainConfig& config, std::span<const DocIndex> doc_indices = {},
                   const IterationObserver& observer = {});

}  // namespace topicatlas
