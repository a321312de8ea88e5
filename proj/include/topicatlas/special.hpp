#pragma once

#include <span>

namespace topicatlas {

double digamma(double x);
double trigamma(double x);
double log_gamma(double x);

/// In-place: replaces log-weights by the normalized probabilities exp(w - logsumexp(w)).
/// Returns the log normalizer.
double normalize_log_weights(std::span<double> log_weights);

}  // namespace topicatlas
