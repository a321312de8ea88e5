#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "topicatlas/error.hpp"
#include "topicatlas/inference.hpp"
#include "topicatlas/special.hpp"

namespace topicatlas {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_finite(std::span<const double> v, const char* update) {
  for (double x : v)
    if (!std::isfinite(x)) throw NumericalError(std::string("non-finite value in ") + update + " update");
}

void digamma_of(std::span<const double> gamma, std::vector<double>& out) {
  out.resize(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) out[k] = digamma(gamma[k]);
}

std::size_t active_links(const Document& doc, const TrainConfig& config) {
  return config.use_links ? doc.link_tokens.size() : 0;
}

}  // namespace

namespace updates {

void phi_row(std::span<double> phi_row, std::span<const double> digamma_gamma, const Matrix& log_beta,
             TermId word) {
  for (std::size_t k = 0; k < phi_row.size(); ++k) phi_row[k] = log_beta(k, word) + digamma_gamma[k];
  normalize_log_weights(phi_row);
}

void gamma(std::span<double> gamma, std::span<const double> alpha, const DocVariational& var) {
  const std::size_t kw = gamma.size();
  for (std::size_t k = 0; k < kw; ++k) gamma[k] = alpha[k];
  for (std::size_t n = 0; n < var.phi.rows(); ++n) {
    auto row = var.phi.row(n);
    for (std::size_t k = 0; k < kw; ++k) gamma[k] += row[k];
  }
  for (std::size_t l = 0; l < var.lambda.rows(); ++l) {
    auto row = var.lambda.row(l);
    for (std::size_t k = 0; k < kw; ++k) gamma[k] += row[k];
  }
}

void lambda_row(std::span<double> lambda_row, std::span<const double> digamma_gamma,
                std::span<const double> sigma_row, const Matrix& log_eta) {
  for (std::size_t k = 0; k < lambda_row.size(); ++k) {
    double s = digamma_gamma[k];
    auto eta_k = log_eta.row(k);
    for (std::size_t j = 0; j < sigma_row.size(); ++j) s += sigma_row[j] * eta_k[j];
    lambda_row[k] = s;
  }
  normalize_log_weights(lambda_row);
}

void sigma_row(std::span<double> sigma_row, std::span<const double> lambda_row, const Matrix& log_eta,
               const Matrix& log_omega, DocIndex target) {
  for (std::size_t j = 0; j < sigma_row.size(); ++j) {
    double s = log_omega(j, target);
    for (std::size_t k = 0; k < lambda_row.size(); ++k) s += lambda_row[k] * log_eta(k, j);
    sigma_row[j] = s;
  }
  normalize_log_weights(sigma_row);
}

}  // namespace updates

ElboParts document_elbo(const Document& doc, const ModelParams& params, const LogParams& logs,
                        const DocVariational& var, bool use_links) {
  const std::size_t kw = params.num_word_topics();
  const std::size_t ky = params.num_doc_topics();
  ElboParts out;

  double alpha_sum = 0.0, gamma_sum = 0.0;
  for (std::size_t k = 0; k < kw; ++k) {
    alpha_sum += params.alpha[k];
    gamma_sum += var.gamma[k];
  }
  const double dg_sum = digamma(gamma_sum);
  std::vector<double> elog_theta(kw);
  for (std::size_t k = 0; k < kw; ++k) elog_theta[k] = digamma(var.gamma[k]) - dg_sum;

  // E[log p(theta | alpha)] - E[log q(theta | gamma)], grouped so that gamma == alpha gives exactly 0.
  double text = log_gamma(alpha_sum) - log_gamma(gamma_sum);
  for (std::size_t k = 0; k < kw; ++k) {
    text += (log_gamma(var.gamma[k]) - log_gamma(params.alpha[k])) +
            (params.alpha[k] - var.gamma[k]) * elog_theta[k];
  }

  for (std::size_t n = 0; n < var.phi.rows(); ++n) {
    const TermId w = doc.word_tokens[n];
    auto phi = var.phi.row(n);
    for (std::size_t k = 0; k < kw; ++k) {
      if (phi[k] > 0.0) text += phi[k] * (elog_theta[k] + logs.log_beta(k, w)) - xlogx(phi[k]);
    }
  }
  out.text = text;

  if (use_links) {
    double link = 0.0;
    for (std::size_t l = 0; l < var.lambda.rows(); ++l) {
      const DocIndex target = doc.link_tokens[l];
      auto lam = var.lambda.row(l);
      auto sig = var.sigma.row(l);
      for (std::size_t k = 0; k < kw; ++k) {
        if (lam[k] <= 0.0) continue;
        double cross = 0.0;
        auto eta_k = logs.log_eta.row(k);
        for (std::size_t j = 0; j < ky; ++j) cross += sig[j] * eta_k[j];
        link += lam[k] * (elog_theta[k] + cross) - xlogx(lam[k]);
      }
      for (std::size_t j = 0; j < ky; ++j) {
        if (sig[j] > 0.0) link += sig[j] * logs.log_omega(j, target) - xlogx(sig[j]);
      }
    }
    out.link = link;
  }
  return out;
}

DocEStep e_step_document(const Document& doc, const ModelParams& params, const LogParams& logs,
                         const TrainConfig& config, const DocVariational* init) {
  const std::size_t kw = params.num_word_topics();
  const std::size_t ky = params.num_doc_topics();
  const std::size_t n_words = doc.word_tokens.size();
  const std::size_t n_links = active_links(doc, config);

  DocEStep res;
  DocVariational& var = res.var;
  const bool warm = init && init->gamma.size() == kw && init->phi.rows() == n_words && init->phi.cols() == kw &&
                    init->lambda.rows() == n_links && init->sigma.rows() == n_links && init->sigma.cols() == ky;
  if (warm) {
    var = *init;
  } else {
    var.phi = Matrix(n_words, kw, 1.0 / static_cast<double>(kw));
    var.lambda = Matrix(n_links, kw, 1.0 / static_cast<double>(kw));
    var.sigma = Matrix(n_links, ky, 1.0 / static_cast<double>(ky));
    var.gamma.resize(kw);
    const double spread = static_cast<double>(n_words + n_links) / static_cast<double>(kw);
    for (std::size_t k = 0; k < kw; ++k) var.gamma[k] = params.alpha[k] + spread;
  }

  if (n_words + n_links == 0) {
    for (std::size_t k = 0; k < kw; ++k) var.gamma[k] = params.alpha[k];
    res.elbo = document_elbo(doc, params, logs, var, config.use_links);
    return res;
  }

  std::vector<double> dg;
  double previous = 0.0;
  for (int it = 1; it <= config.inner_max_iters; ++it) {
    digamma_of(var.gamma, dg);
    for (std::size_t n = 0; n < n_words; ++n) {
      updates::phi_row(var.phi.row(n), dg, logs.log_beta, doc.word_tokens[n]);
      require_finite(var.phi.row(n), "phi");
    }
    updates::gamma(var.gamma, params.alpha, var);
    require_finite(var.gamma, "gamma");

    if (n_links > 0) {
      digamma_of(var.gamma, dg);
      for (std::size_t l = 0; l < n_links; ++l) {
        updates::lambda_row(var.lambda.row(l), dg, var.sigma.row(l), logs.log_eta);
        require_finite(var.lambda.row(l), "lambda");
      }
      updates::gamma(var.gamma, params.alpha, var);
      require_finite(var.gamma, "gamma");
      for (std::size_t l = 0; l < n_links; ++l) {
        updates::sigma_row(var.sigma.row(l), var.lambda.row(l), logs.log_eta, logs.log_omega,
                           doc.link_tokens[l]);
        require_finite(var.sigma.row(l), "sigma");
      }
    }

    res.elbo = document_elbo(doc, params, logs, var, config.use_links);
    const double current = res.elbo.total();
    if (!std::isfinite(current)) throw NumericalError("non-finite document ELBO in document '" + doc.id + "'");
    res.sweeps = it;
    res.sweep_elbos.push_back(current);
    if (it > 1 && (current - previous) / std::abs(previous) < config.inner_tol) break;
    previous = current;
  }
  return res;
}

DocEStep e_step_document(const Document& doc, const ModelParams& params, const TrainConfig& config) {
  return e_step_document(doc, params, LogParams(params), config);
}

double compute_elbo(const Corpus& corpus, const ModelParams& params, std::span<const DocIndex> doc_indices,
                    std::span<const DocVariational> per_doc, bool use_links) {
  if (doc_indices.size() != per_doc.size()) throw ValidationError("compute_elbo: size mismatch");
  if (per_doc.empty()) return 0.0;
  const LogParams logs(params);
  double total = 0.0;
  for (std::size_t j = 0; j < per_doc.size(); ++j)
    total += document_elbo(corpus.doc(doc_indices[j]), params, logs, per_doc[j], use_links).total();
  if (!std::isfinite(total)) throw NumericalError("compute_elbo: non-finite ELBO");
  return total;
}

double compute_elbo(const Corpus& corpus, const ModelParams& params, std::span<const DocVariational> per_doc) {
  std::vector<DocIndex> idx(per_doc.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<DocIndex>(i);
  return compute_elbo(corpus, params, idx, per_doc, true);
}

SuffStats::SuffStats(std::size_t num_word_topics, std::size_t num_doc_topics, std::size_t vocab_size,
                     std::size_t corpus_docs)
    : beta_counts(num_word_topics, vocab_size),
      eta_counts(num_word_topics, num_doc_topics),
      omega_counts(num_doc_topics, corpus_docs),
      gamma_log_sums(num_word_topics, 0.0) {}

void SuffStats::clear() {
  beta_counts.fill(0.0);
  eta_counts.fill(0.0);
  omega_counts.fill(0.0);
  std::fill(gamma_log_sums.begin(), gamma_log_sums.end(), 0.0);
  num_docs = 0;
  elbo_sum = 0.0;
}

void SuffStats::add(const Document& doc, const DocVariational& var) {
  const std::size_t kw = beta_counts.rows();
  const std::size_t ky = eta_counts.cols();
  for (std::size_t n = 0; n < var.phi.rows(); ++n) {
    const TermId w = doc.word_tokens[n];
    for (std::size_t k = 0; k < kw; ++k) beta_counts(k, w) += var.phi(n, k);
  }
  for (std::size_t l = 0; l < var.lambda.rows(); ++l) {
    const DocIndex target = doc.link_tokens[l];
    for (std::size_t k = 0; k < kw; ++k)
      for (std::size_t j = 0; j < ky; ++j) eta_counts(k, j) += var.sigma(l, j) * var.lambda(l, k);
    for (std::size_t j = 0; j < ky; ++j) omega_counts(j, target) += var.sigma(l, j);
  }
  double gsum = 0.0;
  for (double g : var.gamma) gsum += g;
  const double dg_sum = digamma(gsum);
  for (std::size_t k = 0; k < kw; ++k) gamma_log_sums[k] += digamma(var.gamma[k]) - dg_sum;
  ++num_docs;
}

void estep_sweep_serial(const Corpus& corpus, std::span<const DocIndex> doc_indices, const ModelParams& params,
                        const TrainConfig& config, std::vector<DocEStep>& out) {
  const LogParams logs(params);
  const bool warm = config.warm_start && out.size() == doc_indices.size();
  out.resize(doc_indices.size());
  for (std::size_t j = 0; j < doc_indices.size(); ++j)
    out[j] = e_step_document(corpus.doc(doc_indices[j]), params, logs, config, warm ? &out[j].var : nullptr);
}

void estep_sweep_parallel(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                          const ModelParams& params, const TrainConfig& config, std::vector<DocEStep>& out) {
  const LogParams logs(params);
  const bool warm = config.warm_start && out.size() == doc_indices.size();
  out.resize(doc_indices.size());
  const auto n = static_cast<std::ptrdiff_t>(doc_indices.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    try {
      out[j] = e_step_document(corpus.doc(doc_indices[j]), params, logs, config, warm ? &out[j].var : nullptr);
    } catch (...) {
#pragma omp critical(topicatlas_estep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void accumulate_serial(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                       std::span<const DocEStep> results, SuffStats& stats) {
  for (std::size_t j = 0; j < results.size(); ++j) {
    stats.add(corpus.doc(doc_indices[j]), results[j].var);
    stats.elbo_sum += results[j].elbo.total();
  }
}

// Each count row is owned by one thread and visits documents in order, so every cell sees the
// same sequence of additions as the serial reference.
void accumulate_parallel(const Corpus& corpus, std::span<const DocIndex> doc_indices,
                         std::span<const DocEStep> results, SuffStats& stats) {
  const auto kw = static_cast<std::ptrdiff_t>(stats.beta_counts.rows());
  const auto ky = static_cast<std::ptrdiff_t>(stats.eta_counts.cols());
  const std::size_t n_docs = results.size();

#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t k = 0; k < kw; ++k) {
      auto beta_row = stats.beta_counts.row(k);
      auto eta_row = stats.eta_counts.row(k);
      for (std::size_t j = 0; j < n_docs; ++j) {
        const Document& doc = corpus.doc(doc_indices[j]);
        const DocVariational& var = results[j].var;
        for (std::size_t n = 0; n < var.phi.rows(); ++n) beta_row[doc.word_tokens[n]] += var.phi(n, k);
        for (std::size_t l = 0; l < var.lambda.rows(); ++l)
          for (std::ptrdiff_t c = 0; c < ky; ++c) eta_row[c] += var.sigma(l, c) * var.lambda(l, k);
      }
    }
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < ky; ++c) {
      auto omega_row = stats.omega_counts.row(c);
      for (std::size_t j = 0; j < n_docs; ++j) {
        const Document& doc = corpus.doc(doc_indices[j]);
        const DocVariational& var = results[j].var;
        for (std::size_t l = 0; l < var.sigma.rows(); ++l) omega_row[doc.link_tokens[l]] += var.sigma(l, c);
      }
    }
  }

  for (std::size_t j = 0; j < n_docs; ++j) {
    const auto& gamma = results[j].var.gamma;
    double gsum = 0.0;
    for (double g : gamma) gsum += g;
    const double dg_sum = digamma(gsum);
    for (std::ptrdiff_t k = 0; k < kw; ++k) stats.gamma_log_sums[k] += digamma(gamma[k]) - dg_sum;
    stats.elbo_sum += results[j].elbo.total();
  }
  stats.num_docs += n_docs;
}

}  // namespace topicatlas
