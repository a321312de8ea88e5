#include "topicatlas/generate.hpp"

#include <algorithm>
#include <string>

#include "topicatlas/error.hpp"

namespace topicatlas {

namespace {

std::string padded(char prefix, std::size_t i, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(count).size());
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::size_t draw(std::span<const double> probs, std::mt19937_64& rng) {
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  return dist(rng);
}

}  // namespace

std::vector<double> sample_dirichlet(std::span<const double> concentration, std::mt19937_64& rng) {
  std::vector<double> out(concentration.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::gamma_distribution<double> g(concentration[k], 1.0);
    double v = 0.0;
    do {
      v = g(rng);
    } while (v <= 0.0);
    out[k] = v;
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

Corpus generate_corpus(const ModelParams& params, std::span<const std::size_t> doc_lengths,
                       std::span<const std::size_t> link_counts, std::uint64_t seed) {
  params.validate(1e-9, false);
  const std::size_t d = params.num_docs();
  if (doc_lengths.size() != d || link_counts.size() != d)
    throw ValidationError("generate_corpus: doc_lengths and link_counts must have one entry per document");

  std::mt19937_64 rng(seed);
  std::vector<Document> docs(d);
  for (std::size_t i = 0; i < d; ++i) {
    Document& doc = docs[i];
    doc.id = padded('d', i, d);
    const std::vector<double> theta = sample_dirichlet(params.alpha, rng);
    for (std::size_t n = 0; n < doc_lengths[i]; ++n) {
      const std::size_t z = draw(theta, rng);
      doc.word_tokens.push_back(static_cast<TermId>(draw(params.beta.row(z), rng)));
    }
    for (std::size_t l = 0; l < link_counts[i]; ++l) {
      const std::size_t t = draw(theta, rng);
      const std::size_t zp = draw(params.eta.row(t), rng);
      doc.link_tokens.push_back(static_cast<DocIndex>(draw(params.omega.row(zp), rng)));
    }
    for (std::size_t n = 0; n < doc.word_tokens.size() && n < 40; ++n) {
      if (n) doc.snippet += ' ';
      doc.snippet += padded('w', doc.word_tokens[n], params.vocab_size());
    }
  }
  std::vector<std::string> terms;
  for (std::size_t v = 0; v < params.vocab_size(); ++v) terms.push_back(padded('w', v, params.vocab_size()));
  return Corpus(std::move(docs), Vocabulary(std::move(terms)));
}

ModelParams random_params(std::size_t num_word_topics, std::size_t num_doc_topics, std::size_t vocab_size,
                          std::size_t num_docs, double alpha, double concentration, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ModelParams p;
  p.alpha.assign(num_word_topics, alpha);
  auto fill = [&](Matrix& m, std::size_t rows, std::size_t cols) {
    m = Matrix(rows, cols);
    const std::vector<double> conc(cols, concentration);
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = sample_dirichlet(conc, rng);
      std::copy(row.begin(), row.end(), m.row(r).begin());
    }
  };
  fill(p.beta, num_word_topics, vocab_size);
  fill(p.eta, num_word_topics, num_doc_topics);
  fill(p.omega, num_doc_topics, num_docs);
  return p;
}

}  // namespace topicatlas
