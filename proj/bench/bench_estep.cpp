// Serial reference vs OpenMP kernels for one E-step sweep and the sufficient-statistic reduction.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "topicatlas/generate.hpp"
#include "topicatlas/inference.hpp"

using namespace topicatlas;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t docs = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 400;
  const std::size_t topics = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20;
  const std::size_t vocab = 2000;

  const ModelParams truth = random_params(topics, topics, vocab, docs, 0.1, 0.05, 1);
  const std::vector<std::size_t> lengths(docs, 120), links(docs, 8);
  const Corpus corpus = generate_corpus(truth, lengths, links, 2);

  TrainConfig config;
  config.num_word_topics = topics;
  config.num_doc_topics = topics;
  config.inner_max_iters = 20;
  const ModelParams params = init_model(corpus, config);
  std::vector<DocIndex> idx(docs);
  for (std::size_t i = 0; i < docs; ++i) idx[i] = static_cast<DocIndex>(i);

  std::vector<DocEStep> serial, parallel;
  const double t_serial = best_of(3, [&] { estep_sweep_serial(corpus, idx, params, config, serial); });
  const double t_parallel = best_of(3, [&] { estep_sweep_parallel(corpus, idx, params, config, parallel); });

  SuffStats s1(topics, topics, vocab, docs), s2(topics, topics, vocab, docs);
  const double r_serial = best_of(3, [&] {
    s1.clear();
    accumulate_serial(corpus, idx, serial, s1);
  });
  const double r_parallel = best_of(3, [&] {
    s2.clear();
    accumulate_parallel(corpus, idx, parallel, s2);
  });

  bool identical = s1.beta_counts == s2.beta_counts && s1.eta_counts == s2.eta_counts &&
                   s1.omega_counts == s2.omega_counts;
  for (std::size_t j = 0; j < docs; ++j) identical = identical && serial[j].var == parallel[j].var;

  std::printf("docs=%zu topics=%zu vocab=%zu threads=%d\n", docs, topics, vocab, omp_get_max_threads());
  std::printf("%-12s %12s %12s %9s\n", "kernel", "serial_s", "parallel_s", "speedup");
  std::printf("%-12s %12.4f %12.4f %9.2f\n", "estep", t_serial, t_parallel, t_serial / t_parallel);
  std::printf("%-12s %12.4f %12.4f %9.2f\n", "accumulate", r_serial, r_parallel, r_serial / r_parallel);
  std::printf("bitwise identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
