// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "support.hpp"
#include "topicatlas/evaluation.hpp"
#include "topicatlas/inference.hpp"
#include "topicatlas/special.hpp"
#include "topicatlas/topicweb.hpp"

using namespace topicatlas;
using testsupport::make_doc;
using testsupport::matrix_of;
using testsupport::vocab_of;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

TrainConfig config3(std::uint64_t seed) {
  TrainConfig c;
  c.num_word_topics = 3;
  c.num_doc_topics = 3;
  c.seed = seed;
  return c;
}

Outcome elbo_monotonicity() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t shortest = 1000;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = testsupport::synthetic_network(seed, 120, 15);
    TrainConfig cfg = config3(seed);
    cfg.outer_tol = 1e-14;
    cfg.outer_max_iters = 30;
    const TrainedModel m = train(s.corpus, cfg);
    shortest = std::min(shortest, m.elbo_trace.size());
    for (std::size_t i = 1; i < m.elbo_trace.size(); ++i)
      worst = std::min(worst, (m.elbo_trace[i] - m.elbo_trace[i - 1]) / std::abs(m.elbo_trace[i - 1]));
  }
  const double secs = seconds_since(t0);
  o.require(shortest >= 20, "trace shorter than 20 iterations");
  o.require(worst >= -1e-8, "relative decrease " + fmt("%.3g", worst));
  o.require(secs < 30.0, "runtime " + fmt("%.1fs", secs));
  if (o.pass)
    o.detail = "3 seeds x " + std::to_string(shortest) + " iterations, worst relative step " + fmt("%.2g", worst) +
               ", " + fmt("%.1fs", secs);
  return o;
}

Outcome normalization_suite() {
  Outcome o;
  const auto s = testsupport::synthetic_network(4, 80, 10);
  TrainConfig cfg = config3(4);
  cfg.outer_max_iters = 12;
  cfg.outer_tol = 1e-12;
  double worst_param = 0.0, worst_var = 0.0;
  bool gamma_exact = true;
  int iterations = 0;
  train(s.corpus, cfg, {}, [&](const IterationState& st) {
    ++iterations;
    for (const Matrix* m : {&st.after->beta, &st.after->eta, &st.after->omega})
      worst_param = std::max(worst_param, testsupport::max_row_error(*m));
    for (const DocEStep& r : st.estep) {
      for (const Matrix* m : {&r.var.phi, &r.var.lambda, &r.var.sigma})
        worst_var = std::max(worst_var, testsupport::max_row_error(*m));
      for (std::size_t k = 0; k < r.var.gamma.size(); ++k) {
        double g = st.before->alpha[k];
        for (std::size_t n = 0; n < r.var.phi.rows(); ++n) g += r.var.phi(n, k);
        for (std::size_t l = 0; l < r.var.lambda.rows(); ++l) g += r.var.lambda(l, k);
        gamma_exact = gamma_exact && g == r.var.gamma[k];
      }
    }
  });
  o.require(worst_param <= 1e-9, "parameter row error " + fmt("%.3g", worst_param));
  o.require(worst_var <= 1e-9, "variational row error " + fmt("%.3g", worst_var));
  o.require(gamma_exact, "gamma differs from alpha + sum phi + sum lambda");
  if (o.pass)
    o.detail = std::to_string(iterations) + " iterations; max row error params " + fmt("%.2g", worst_param) +
               ", variational " + fmt("%.2g", worst_var) + "; gamma exact";
  return o;
}

Outcome lda_reduction() {
  Outcome o;
  const Corpus text_only = testsupport::synthetic_network(5, 60, 8).corpus.without_links();
  TrainConfig cfg = config3(5);
  cfg.outer_max_iters = 10;
  const TrainedModel with_links = train(text_only, cfg);
  cfg.use_links = false;
  const TrainedModel disabled = train(text_only, cfg);
  o.require(with_links.params == disabled.params, "parameters differ");
  o.require(with_links.elbo_trace == disabled.elbo_trace, "ELBO traces differ");
  o.require(with_links.summaries == disabled.summaries, "document summaries differ");
  bool empty = true;
  for (const auto& v : with_links.per_doc) empty = empty && v.lambda.rows() == 0 && v.sigma.rows() == 0;
  o.require(empty, "lambda/sigma not empty");
  if (o.pass) o.detail = "bitwise identical over " + std::to_string(with_links.elbo_trace.size()) + " iterations";
  return o;
}

Outcome single_topic_oracle() {
  Outcome o;
  ModelParams p;
  p.alpha = {0.5};
  p.beta = matrix_of({{0.3, 0.7}});
  p.eta = matrix_of({{1.0}});
  p.omega = matrix_of({{0.4, 0.6}});
  const std::vector<Document> docs{make_doc("x", {0, 0, 1}, {1}), make_doc("y", {1}, {0, 0})};
  const Corpus c(docs, vocab_of(2));
  const double exact = 2 * std::log(0.3) + 2 * std::log(0.7) + std::log(0.6) + 2 * std::log(0.4);
  TrainConfig cfg = config3(0);
  cfg.num_word_topics = cfg.num_doc_topics = 1;
  std::vector<DocVariational> vars;
  for (const auto& d : docs) vars.push_back(e_step_document(d, p, cfg).var);
  const double elbo = compute_elbo(c, p, vars);
  const std::vector<DocIndex> all{0, 1};
  const double heldout = heldout_log_likelihood(p, c, all, cfg).total();
  o.require(std::abs(elbo - exact) < 1e-9, "compute_elbo off by " + fmt("%.3g", elbo - exact));
  o.require(std::abs(heldout - exact) < 1e-9, "held-out off by " + fmt("%.3g", heldout - exact));
  if (o.pass)
    o.detail = "exact " + fmt("%.12f", exact) + ", errors " + fmt("%.1g", std::abs(elbo - exact)) + " / " +
               fmt("%.1g", std::abs(heldout - exact));
  return o;
}

Outcome parameter_recovery() {
  Outcome o;
  const auto t0 = Clock::now();
  std::string summary;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = testsupport::synthetic_network(seed);
    double best_beta = 0.0, best_omega = 0.0;
    int passing = -1;
    for (int restart = 0; restart < 3 && passing < 0; ++restart) {
      TrainConfig cfg = config3(seed * 10 + restart);
      cfg.outer_tol = 1e-6;
      cfg.outer_max_iters = 200;
      const TrainedModel m = train(s.corpus, cfg);
      const double b = testsupport::matched_cosine(s.truth.beta, m.params.beta);
      const double w = testsupport::matched_cosine(s.truth.omega, m.params.omega);
      if (std::min(b, w) > std::min(best_beta, best_omega)) {
        best_beta = b;
        best_omega = w;
      }
      if (b > 0.9 && w > 0.9) passing = restart;
    }
    o.require(passing >= 0, "seed " + std::to_string(seed) + " best beta " + fmt("%.3f", best_beta) + " omega " +
                                fmt("%.3f", best_omega));
    summary += (summary.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) + " beta " +
               fmt("%.3f", best_beta) + " omega " + fmt("%.3f", best_omega);
  }
  const double secs = seconds_since(t0);
  o.require(secs < 120.0, "runtime " + fmt("%.1fs", secs));
  if (o.pass) o.detail = summary + " (" + fmt("%.1fs", secs) + ")";
  return o;
}

Outcome relation_strength() {
  Outcome o;
  const auto s = testsupport::synthetic_network(6, 80, 10);
  TrainConfig cfg = config3(2);
  cfg.num_word_topics = 4;
  cfg.outer_max_iters = 10;
  const TrainedModel m = train(s.corpus, cfg);
  const PosteriorStats st = posterior_stats(m);
  const Matrix ww = word_word_strength(st, m.params);
  const Matrix dd = doc_doc_strength(st, m.params);
  const Matrix wd = word_doc_strength(st, m.params);
  auto total = [](const Matrix& x) {
    double t = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) t += testsupport::row_sum(x.row(r));
    return t;
  };
  auto asymmetry = [](const Matrix& x) {
    double a = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) a = std::max(a, std::abs(x(r, c) - x(c, r)));
    return a;
  };
  o.require(std::abs(total(ww) - 1) <= 1e-6, "Word-Word sum " + fmt("%.12f", total(ww)));
  o.require(std::abs(total(dd) - 1) <= 1e-6, "Doc-Doc sum " + fmt("%.12f", total(dd)));
  o.require(std::abs(total(wd) - 1) <= 1e-6, "Word-Doc sum " + fmt("%.12f", total(wd)));
  o.require(asymmetry(ww) <= 1e-12 && asymmetry(dd) <= 1e-12, "asymmetric matrix");

  // Toy instance against the exhaustive loop over (k', i, k1, k2).
  PosteriorStats toy;
  toy.theta_hat = matrix_of({{0.7, 0.3}, {0.15, 0.85}});
  toy.p_doc_topic = {0.35, 0.65};
  toy.p_word_topic = {0.5, 0.5};
  ModelParams p = m.params;
  p.alpha = {0.1, 0.1};
  p.eta = matrix_of({{0.5, 0.5}, {0.5, 0.5}});
  p.omega = matrix_of({{0.9, 0.1}, {0.25, 0.75}});
  const Matrix fast = word_word_strength(toy, p);
  double err = 0.0;
  for (std::size_t k1 = 0; k1 < 2; ++k1)
    for (std::size_t k2 = 0; k2 < 2; ++k2) {
      double brute = 0.0;
      for (std::size_t kp = 0; kp < 2; ++kp)
        for (std::size_t i = 0; i < 2; ++i)
          brute += toy.p_doc_topic[kp] * p.omega(kp, i) * toy.theta_hat(i, k1) * toy.theta_hat(i, k2);
      err = std::max(err, std::abs(fast(k1, k2) - brute));
    }
  o.require(err <= 1e-12, "brute-force mismatch " + fmt("%.3g", err));
  if (o.pass)
    o.detail = "sums " + fmt("%.12f", total(ww)) + " / " + fmt("%.12f", total(dd)) + " / " + fmt("%.12f", total(wd)) +
               "; brute-force error " + fmt("%.1g", err);
  return o;
}

Outcome hand_oracles() {
  Outcome o;
  // phi update with equal digamma terms and beta column (0.9, 0.2).
  std::vector<double> phi(2);
  const std::vector<double> dg{digamma(1.0), digamma(1.0)};
  updates::phi_row(phi, dg, matrix_of({{std::log(0.9)}, {std::log(0.2)}}), 0);
  o.require(std::abs(phi[0] - 0.8182) <= 1e-4 && std::abs(phi[1] - 0.1818) <= 1e-4, "phi example");

  // theta_hat from four words on topic 0 with alpha 0.01.
  TrainedModel tm;
  tm.params.alpha = {0.01, 0.01};
  tm.params.beta = Matrix(2, 1, 1.0);
  tm.params.eta = Matrix(2, 1, 1.0);
  tm.params.omega = Matrix(1, 1, 1.0);
  tm.doc_indices = {0};
  tm.summaries = {{{4.01, 0.01}, {4.0, 0.0}, {1.0}}};
  const Matrix theta = posterior_theta(tm);
  o.require(std::abs(theta(0, 0) - 0.99751) <= 1e-5 && std::abs(theta(0, 1) - 0.00249) <= 1e-5, "theta_hat example");

  // Indicative words: omega row (0.7, 0.3); doc1 {a:2, b:1}, doc2 {b:4}.
  const Corpus iw({make_doc("d1", {0, 0, 1}), make_doc("d2", {1, 1, 1, 1})}, Vocabulary({"a", "b"}));
  ModelParams ip;
  ip.alpha = {0.1};
  ip.beta = matrix_of({{0.5, 0.5}});
  ip.eta = matrix_of({{1.0}});
  ip.omega = matrix_of({{0.7, 0.3}});
  o.require(iw.vocabulary().term(static_cast<TermId>(indicative_words(ip, iw, 0, 2)[0].index)) == "b",
            "indicative word ranking");

  // Doc-Doc entry.
  PosteriorStats ps;
  ps.p_word_topic = {0.6, 0.4};
  ModelParams dp;
  dp.alpha = {0.1, 0.1};
  dp.eta = matrix_of({{0.7, 0.3}, {0.2, 0.8}});
  o.require(std::abs(doc_doc_strength(ps, dp)(0, 0) - 0.31) <= 1e-12, "Doc-Doc entry");

  // Coherence toys.
  const Corpus together({make_doc("1", {0, 1}), make_doc("2", {0, 1}), make_doc("3", {1, 0}), make_doc("4", {0, 1})},
                        vocab_of(2));
  const Corpus apart({make_doc("1", {0}), make_doc("2", {0}), make_doc("3", {0}), make_doc("4", {0}),
                      make_doc("5", {0}), make_doc("6", {1})},
                     vocab_of(2));
  const std::vector<TermId> pair{0, 1};
  o.require(std::abs(topic_coherence(pair, together) - 0.2231) <= 1e-4 &&
                std::abs(topic_coherence(pair, together) - std::log(1.25)) <= 1e-6,
            "coherence log(5/4)");
  o.require(std::abs(topic_coherence(pair, apart) - std::log(0.2)) <= 1e-6, "coherence log(1/5)");
  if (o.pass)
    o.detail = "phi (" + fmt("%.4f", phi[0]) + ", " + fmt("%.4f", phi[1]) + "), theta_hat " + fmt("%.5f", theta(0, 0)) +
               ", Doc-Doc 0.31, coherence " + fmt("%.4f", topic_coherence(pair, together)) + " / " +
               fmt("%.4f", topic_coherence(pair, apart));
  return o;
}

Outcome protocol_reproduction() {
  Outcome o;
  testsupport::TempDir dir("acceptance");
  const std::string records = dir / "network.jsonl";
  std::ofstream(records) << testsupport::to_jsonl(testsupport::synthetic_network(7, 60, 6).corpus);
  const std::string out = dir / "eval";
  const int code = cli::run(std::vector<std::string>{"topicatlas", "evaluate", records, "--folds", "5", "--min-links",
                                                     "3", "--kw", "3", "--ky", "3", "--min-count", "1", "--out", out});
  o.require(code == 0, "evaluate exited with " + std::to_string(code));
  std::istringstream csv(testsupport::slurp(out + "/heldout.csv"));
  std::string line;
  int rows = -1;  // header
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  o.require(rows == 5, "heldout.csv has " + std::to_string(rows) + " fold rows");
  const double w = edge_weight(0.003, 0.0002);
  o.require(w == 15.0, "edge weight " + fmt("%.17g", w));
  if (o.pass) o.detail = "5 fold rows written; edge weight 0.003 / 0.0002 = " + fmt("%.17g", w);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ELBO monotonicity", elbo_monotonicity},
      {"Normalization suite", normalization_suite},
      {"LDA reduction", lda_reduction},
      {"K=1 exact oracle", single_topic_oracle},
      {"Parameter recovery", parameter_recovery},
      {"Relation-strength normalization", relation_strength},
      {"Hand-computed oracles", hand_oracles},
      {"Protocol reproduction", protocol_reproduction},
  };
  std::vector<std::string> lines;
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    lines.push_back(std::string(o.pass ? "PASS" : "FAIL") + "  " + name + ": " + o.detail);
  }
  // Commands print progress to stdout; keep the verdicts together at the end.
  std::fflush(stdout);
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
