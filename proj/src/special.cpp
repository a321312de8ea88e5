#include "topicatlas/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "topicatlas/error.hpp"

namespace topicatlas {

double digamma(double x) { return boost::math::digamma(x); }

double trigamma(double x) { return boost::math::trigamma(x); }

double log_gamma(double x) { return boost::math::lgamma(x); }

double normalize_log_weights(std::span<double> w) {
  if (w.empty()) return 0.0;
  const double mx = *std::max_element(w.begin(), w.end());
  if (!std::isfinite(mx)) throw NumericalError("normalize_log_weights: non-finite maximum");
  double sum = 0.0;
  for (double& v : w) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : w) v /= sum;
  return mx + std::log(sum);
}

}  // namespace topicatlas
