#include "topicatlas/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "topicatlas/error.hpp"

namespace topicatlas {

namespace {

void check_rows(const Matrix& m, const char* name, double tol, bool strict) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sum = 0.0;
    for (double v : m.row(r)) {
      if (!(strict ? v > 0.0 : v >= 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " row " + std::to_string(r) + " has an invalid entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      throw ValidationError(std::string(name) + " row " + std::to_string(r) + " does not sum to 1");
  }
}

void fill_random_rows(Matrix& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double sum = 0.0;
    for (double& v : row) {
      do {
        v = unif(rng);
      } while (v <= 0.0);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

Matrix elementwise_log(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = std::log(m.data()[i]);
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (num_word_topics < 1 || num_doc_topics < 1) throw ValidationError("topic counts must be >= 1");
  if (!(alpha_init > 0.0)) throw ValidationError("alpha_init must be positive");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0)) throw ValidationError("tolerances must be positive");
  if (inner_max_iters < 1 || outer_max_iters < 1) throw ValidationError("iteration caps must be >= 1");
  if (smoothing_eps < 0.0) throw ValidationError("smoothing_eps must be non-negative");
}

void ModelParams::validate(double tol, bool strictly_positive) const {
  const std::size_t kw = alpha.size();
  if (kw == 0) throw ValidationError("alpha is empty");
  for (double a : alpha)
    if (!(a > 0.0)) throw ValidationError("alpha entries must be positive");
  if (beta.rows() != kw || eta.rows() != kw || omega.rows() != eta.cols())
    throw ValidationError("parameter shapes are inconsistent");
  if (beta.cols() == 0 || eta.cols() == 0 || omega.cols() == 0)
    throw ValidationError("parameter matrices have a zero dimension");
  check_rows(beta, "beta", tol, strictly_positive);
  check_rows(eta, "eta", tol, strictly_positive);
  check_rows(omega, "omega", tol, strictly_positive);
}

LogParams::LogParams(const ModelParams& params)
    : log_beta(elementwise_log(params.beta)),
      log_eta(elementwise_log(params.eta)),
      log_omega(elementwise_log(params.omega)) {}

DocSummary summarize(const DocVariational& var) {
  DocSummary s;
  s.gamma = var.gamma;
  s.word_topic_counts.assign(var.gamma.size(), 0.0);
  s.link_topic_counts.assign(var.sigma.cols(), 0.0);
  for (std::size_t n = 0; n < var.phi.rows(); ++n)
    for (std::size_t k = 0; k < var.phi.cols(); ++k) s.word_topic_counts[k] += var.phi(n, k);
  for (std::size_t l = 0; l < var.sigma.rows(); ++l)
    for (std::size_t k = 0; k < var.sigma.cols(); ++k) s.link_topic_counts[k] += var.sigma(l, k);
  return s;
}

ModelParams init_model(std::size_t vocab_size, std::size_t num_docs, const TrainConfig& config) {
  config.validate();
  if (vocab_size == 0 || num_docs == 0) throw ValidationError("init_model: zero vocabulary or document count");
  const std::size_t kw = config.num_word_topics;
  const std::size_t ky = config.num_doc_topics;
  ModelParams p;
  p.alpha.assign(kw, config.alpha_init);
  p.beta = Matrix(kw, vocab_size);
  p.eta = Matrix(kw, ky);
  p.omega = Matrix(ky, num_docs);
  std::mt19937_64 rng(config.seed);
  fill_random_rows(p.beta, rng);
  fill_random_rows(p.eta, rng);
  fill_random_rows(p.omega, rng);
  return p;
}

ModelParams init_model(const Corpus& corpus, const TrainConfig& config) {
  return init_model(corpus.vocab_size(), corpus.num_docs(), config);
}

}  // namespace topicatlas
