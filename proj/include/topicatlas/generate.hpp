#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "topicatlas/corpus.hpp"
#include "topicatlas/model.hpp"

namespace topicatlas {

std::vector<double> sample_dirichlet(std::span<const double> concentration, std::mt19937_64& rng);

/// Forward sampler of the generative process. Terms are named "w0000".., documents "d0000"..
/// so vocabulary order equals term index order. Self-links are kept as sampled.
Corpus generate_corpus(const ModelParams& params, std::span<const std::size_t> doc_lengths,
                       std::span<const std::size_t> link_counts, std::uint64_t seed);

/// Ground-truth parameters for simulation: every row of beta/eta/omega drawn from a symmetric
/// Dirichlet with the given concentration.
ModelParams random_params(std::size_t num_word_topics, std::size_t num_doc_topics, std::size_t vocab_size,
                          std::size_t num_docs, double alpha, double concentration, std::uint64_t seed);

}  // namespace topicatlas
