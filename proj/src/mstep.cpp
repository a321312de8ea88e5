#include <algorithm>
#include <cmath>
#include <string>

#include "topicatlas/error.hpp"
#include "topicatlas/inference.hpp"
#include "topicatlas/special.hpp"

namespace topicatlas {

namespace {

Matrix normalize_counts(const Matrix& counts, double eps, const char* name) {
  Matrix out(counts.rows(), counts.cols());
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    auto src = counts.row(r);
    auto dst = out.row(r);
    double sum = 0.0;
    for (std::size_t c = 0; c < src.size(); ++c) {
      dst[c] = src[c] + eps;
      sum += dst[c];
    }
    if (!(sum > 0.0) || !std::isfinite(sum))
      throw NumericalError(std::string("m_step: ") + name + " row " + std::to_string(r) +
                           " has no mass (enable smoothing)");
    for (double& v : dst) v /= sum;
  }
  return out;
}

double sum_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

double alpha_objective(std::span<const double> gamma_log_sums, std::span<const double> alpha,
                       std::size_t num_docs) {
  const double d = static_cast<double>(num_docs);
  double value = d * log_gamma(sum_of(alpha));
  for (std::size_t k = 0; k < alpha.size(); ++k)
    value += -d * log_gamma(alpha[k]) + (alpha[k] - 1.0) * gamma_log_sums[k];
  return value;
}

AlphaUpdate update_alpha(std::span<const double> gamma_log_sums, std::span<const double> alpha,
                         std::size_t num_docs, int max_iters, double grad_tol) {
  AlphaUpdate res;
  res.alpha.assign(alpha.begin(), alpha.end());
  if (num_docs == 0) return res;
  const std::size_t kw = alpha.size();
  const double d = static_cast<double>(num_docs);
  std::vector<double> grad(kw), hess(kw), step(kw), cand(kw);
  std::vector<double>& a = res.alpha;
  double objective = alpha_objective(gamma_log_sums, a, num_docs);

  res.converged = false;
  for (int it = 0; it < max_iters; ++it) {
    const double a_sum = sum_of(a);
    const double dg_sum = digamma(a_sum);
    double gmax = 0.0;
    for (std::size_t k = 0; k < kw; ++k) {
      grad[k] = d * (dg_sum - digamma(a[k])) + gamma_log_sums[k];
      gmax = std::max(gmax, std::abs(grad[k]));
    }
    if (gmax <= grad_tol * std::max(1.0, d)) {
      res.converged = true;
      break;
    }
    // Hessian = diag(hess) + z * 1 1^T, inverted in O(K).
    const double z = d * trigamma(a_sum);
    double num = 0.0, den = 1.0 / z;
    for (std::size_t k = 0; k < kw; ++k) {
      hess[k] = -d * trigamma(a[k]);
      num += grad[k] / hess[k];
      den += 1.0 / hess[k];
    }
    const double c = num / den;
    for (std::size_t k = 0; k < kw; ++k) step[k] = (grad[k] - c) / hess[k];

    bool accepted = false;
    double scale = 1.0;
    for (int halving = 0; halving < 64; ++halving, scale *= 0.5) {
      bool positive = true;
      for (std::size_t k = 0; k < kw; ++k) {
        cand[k] = a[k] - scale * step[k];
        positive = positive && cand[k] > 0.0 && std::isfinite(cand[k]);
      }
      if (!positive) continue;
      const double value = alpha_objective(gamma_log_sums, cand, num_docs);
      if (value >= objective) {
        accepted = true;
        objective = value;
        break;
      }
    }
    res.iterations = it + 1;
    if (!accepted) {
      // No ascent direction left at double precision.
      res.converged = true;
      break;
    }
    double change = 0.0;
    for (std::size_t k = 0; k < kw; ++k) {
      change = std::max(change, std::abs(cand[k] - a[k]) / a[k]);
      a[k] = cand[k];
    }
    if (change < 1e-12) {
      res.converged = true;
      break;
    }
  }
  return res;
}

ModelParams m_step(const SuffStats& stats, std::span<const double> alpha, const TrainConfig& config,
                   bool* alpha_warning) {
  ModelParams p;
  p.beta = normalize_counts(stats.beta_counts, config.smoothing_eps, "beta");
  p.eta = normalize_counts(stats.eta_counts, config.smoothing_eps, "eta");
  p.omega = normalize_counts(stats.omega_counts, config.smoothing_eps, "omega");
  if (config.update_alpha) {
    AlphaUpdate up = update_alpha(stats.gamma_log_sums, alpha, stats.num_docs);
    if (alpha_warning) *alpha_warning = !up.converged;
    p.alpha = std::move(up.alpha);
  } else {
    p.alpha.assign(alpha.begin(), alpha.end());
    if (alpha_warning) *alpha_warning = false;
  }
  return p;
}

}  // namespace topicatlas
