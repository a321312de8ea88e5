#include "commands.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "server.hpp"
#include "topicatlas/checkpoint.hpp"
#include "topicatlas/corpus.hpp"
#include "topicatlas/error.hpp"
#include "topicatlas/evaluation.hpp"
#include "topicatlas/graph_json.hpp"
#include "topicatlas/hash.hpp"
#include "topicatlas/inference.hpp"
#include "topicatlas/topicweb.hpp"

#ifndef TOPICATLAS_UI_DIR
#define TOPICATLAS_UI_DIR ""
#endif

namespace topicatlas::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct IngestFlags {
  std::size_t min_count = 5;
  std::string stopwords_path;
  bool tokenize = false;

  IngestOptions options() const {
    IngestOptions o;
    o.min_count = min_count;
    o.tokenize_raw = tokenize;
    if (!stopwords_path.empty()) {
      std::ifstream in(stopwords_path);
      if (!in) throw Error("cannot open stopword file '" + stopwords_path + "'");
      std::string line;
      while (std::getline(in, line))
        if (!line.empty()) o.stopwords.insert(line);
    }
    return o;
  }
};

void add_ingest_flags(CLI::App& app, IngestFlags& f) {
  app.add_option("--min-count", f.min_count, "Minimum corpus frequency for a vocabulary term")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--stopwords", f.stopwords_path, "File with one stopword per line");
  app.add_flag("--tokenize", f.tokenize, "Lowercase and split raw text on non-alphanumerics");
}

struct TrainFlags {
  TrainConfig config;
  bool freeze_alpha = false;
  bool no_links = false;
  bool serial = false;
  bool fresh_start = false;

  TrainConfig resolved() const {
    TrainConfig c = config;
    c.update_alpha = !freeze_alpha;
    c.use_links = !no_links;
    c.warm_start = !fresh_start;
    c.mode = serial ? ExecutionMode::kSerial : ExecutionMode::kParallel;
    return c;
  }
};

void add_train_flags(CLI::App& app, TrainFlags& f) {
  auto& c = f.config;
  app.add_option("--kw", c.num_word_topics, "Number of WordTopics")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--ky", c.num_doc_topics, "Number of DocTopics")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--alpha", c.alpha_init, "Initial Dirichlet prior per component")->capture_default_str();
  app.add_option("--inner-tol", c.inner_tol, "E-step fractional ELBO tolerance")->capture_default_str();
  app.add_option("--inner-iters", c.inner_max_iters, "E-step iteration cap")->capture_default_str();
  app.add_option("--outer-tol", c.outer_tol, "EM relative ELBO tolerance")->capture_default_str();
  app.add_option("--outer-iters", c.outer_max_iters, "EM iteration cap")->capture_default_str();
  app.add_option("--eps", c.smoothing_eps, "M-step smoothing added to every count cell")->capture_default_str();
  app.add_option("--seed", c.seed, "Random seed for initialization")->capture_default_str();
  app.add_flag("--freeze-alpha", f.freeze_alpha, "Keep alpha at its initial value");
  app.add_flag("--no-links", f.no_links, "Ignore link tokens (text-only model)");
  app.add_flag("--serial", f.serial, "Use the serial reference kernels");
  app.add_flag("--fresh-start", f.fresh_start, "Re-initialize variational parameters every EM iteration");
}

json config_json(const TrainConfig& c) {
  return json{{"kw", c.num_word_topics},     {"ky", c.num_doc_topics},         {"alpha", c.alpha_init},
              {"inner_tol", c.inner_tol},    {"inner_iters", c.inner_max_iters}, {"outer_tol", c.outer_tol},
              {"outer_iters", c.outer_max_iters}, {"eps", c.smoothing_eps},    {"seed", c.seed},
              {"update_alpha", c.update_alpha}, {"use_links", c.use_links},
              {"warm_start", c.warm_start}, {"mode", c.mode == ExecutionMode::kSerial ? "serial" : "parallel"}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << bytes;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

struct Manifest {
  json doc;
  Clock::time_point start = Clock::now();

  Manifest(const std::string& command, const std::vector<std::string>& argv) {
    doc["command"] = command;
    doc["argv"] = argv;
    doc["threads"] = omp_get_max_threads();
    doc["inputs"] = json::object();
    doc["outputs"] = json::array();
    doc["timings"] = json::object();
  }
  void lap(const std::string& name, Clock::time_point since) {
    doc["timings"][name] = std::chrono::duration<double>(Clock::now() - since).count();
  }
  void write(const fs::path& path) {
    lap("total_seconds", start);
    write_file(path, doc.dump(1) + "\n");
  }
};

void apply_thread_cap() {
  if (const char* env = std::getenv("TOPICATLAS_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) omp_set_num_threads(std::min(cap, omp_get_max_threads()));
  }
}

// ---- train ---------------------------------------------------------------------------------

struct TrainArgs {
  std::string corpus_path;
  std::string out_dir = "model_out";
  IngestFlags ingest;
  TrainFlags train;
};

int cmd_train(const TrainArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("train", argv);
  const TrainConfig config = a.train.resolved();
  ensure_dir(a.out_dir);

  auto t0 = Clock::now();
  IngestStats ingest_stats;
  const Corpus corpus = load_corpus_file(a.corpus_path, a.ingest.options(), &ingest_stats);
  manifest.lap("ingest_seconds", t0);
  if (ingest_stats.dropped_unknown_links > 0)
    std::cerr << "warning: dropped " << ingest_stats.dropped_unknown_links << " link(s) to unknown documents\n";

  t0 = Clock::now();
  const TrainedModel model = train(corpus, config);
  manifest.lap("train_seconds", t0);
  if (model.alpha_warning) std::cerr << "warning: alpha Newton-Raphson hit its iteration cap\n";

  const fs::path out(a.out_dir);
  const std::string checkpoint = serialize_checkpoint(model);
  write_file(out / "model.json", checkpoint);
  write_file(out / "corpus.tac", serialize_corpus(corpus));
  std::ostringstream trace;
  trace << "iteration,elbo\n";
  for (std::size_t i = 0; i < model.elbo_trace.size(); ++i) trace << (i + 1) << ',' << fmt_real(model.elbo_trace[i]) << '\n';
  write_file(out / "elbo_trace.csv", trace.str());

  manifest.doc["config"] = config_json(config);
  manifest.doc["seed"] = config.seed;
  manifest.doc["inputs"] = {{"corpus", a.corpus_path},
                            {"min_count", a.ingest.min_count},
                            {"tokenize", a.ingest.tokenize},
                            {"stopwords", a.ingest.stopwords_path}};
  manifest.doc["corpus_hash"] = hex64(model.corpus_hash);
  manifest.doc["model_hash"] = hex64(fnv1a64(checkpoint));
  manifest.doc["outputs"] = {(out / "model.json").string(), (out / "corpus.tac").string(),
                             (out / "elbo_trace.csv").string()};
  manifest.doc["ingest"] = {{"documents", corpus.num_docs()},
                            {"vocabulary", corpus.vocab_size()},
                            {"word_tokens", corpus.total_word_tokens()},
                            {"link_tokens", corpus.total_link_tokens()},
                            {"dropped_unknown_links", ingest_stats.dropped_unknown_links},
                            {"dropped_self_links", ingest_stats.dropped_self_links}};
  manifest.doc["iterations"] = model.elbo_trace.size();
  manifest.write(out / "manifest.json");

  std::cout << "trained K_w=" << config.num_word_topics << " K_y=" << config.num_doc_topics << " on "
            << corpus.num_docs() << " documents in " << model.elbo_trace.size() << " iteration(s); final ELBO "
            << fmt_real(model.elbo_trace.back()) << "\n"
            << "wrote " << (out / "model.json").string() << "\n";
  return 0;
}

// ---- export-web ----------------------------------------------------------------------------

struct ExportArgs {
  std::string model_path;
  std::string corpus_path;
  std::string out_path = "web.json";
  std::string prior = "0.0002";
  double threshold = kDefaultPruneThreshold;
  std::size_t keywords = kDefaultKeywords;
  std::size_t top_docs = kDefaultTopDocuments;
  std::size_t indicative = kDefaultIndicativeWords;
  IngestFlags ingest;
};

int cmd_export_web(const ExportArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("export-web", argv);
  const std::string checkpoint = read_file(a.model_path);
  const TrainedModel model = parse_checkpoint(checkpoint);
  const Corpus corpus = load_corpus_file(a.corpus_path, a.ingest.options());
  const std::uint64_t hash = corpus_hash(corpus);
  if (hash != model.corpus_hash) {
    std::cerr << "error: corpus hash " << hex64(hash) << " does not match the model's training corpus "
              << hex64(model.corpus_hash) << "; refusing export\n";
    return 1;
  }

  WebOptions options;
  if (a.prior == "auto") {
    options.prior = 0.0;
  } else {
    try {
      options.prior = std::stod(a.prior);
    } catch (const std::exception&) {
      throw ValidationError("--prior must be a positive number or 'auto'");
    }
    if (!(options.prior > 0.0)) throw ValidationError("--prior must be positive");
  }
  options.threshold = a.threshold;
  options.keywords = a.keywords;
  options.top_documents = a.top_docs;
  options.indicative_words = a.indicative;
  options.model_hash = hex64(fnv1a64(checkpoint));

  const TopicWeb web = build_topic_web(model, corpus, options);
  const std::string bytes = export_graph(web);
  if (const std::string problem = validate_graph_json(bytes); !problem.empty())
    throw Error("exported graph failed validation: " + problem);
  const fs::path out(a.out_path);
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  write_file(out, bytes);

  manifest.doc["inputs"] = {{"model", a.model_path}, {"corpus", a.corpus_path}};
  manifest.doc["config"] = {{"prior", web.prior},
                            {"threshold", web.threshold},
                            {"keywords", a.keywords},
                            {"top_docs", a.top_docs},
                            {"indicative_words", a.indicative}};
  manifest.doc["seed"] = model.config.seed;
  manifest.doc["corpus_hash"] = hex64(hash);
  manifest.doc["model_hash"] = options.model_hash;
  manifest.doc["outputs"] = {out.string()};
  manifest.doc["graph"] = {{"nodes", web.nodes.size()}, {"edges", web.edges.size()}};
  fs::path manifest_path = out;
  manifest_path.replace_extension(".manifest.json");
  manifest.write(manifest_path);

  std::cout << "wrote " << out.string() << " (" << web.nodes.size() << " nodes, " << web.edges.size() << " edges)\n";
  return 0;
}

// ---- evaluate ------------------------------------------------------------------------------

struct EvaluateArgs {
  std::string corpus_path;
  std::string out_dir = "eval_out";
  std::size_t folds = 5;
  std::size_t min_links = 0;
  std::uint64_t split_seed = 0;
  std::size_t coherence_m = 10;
  IngestFlags ingest;
  TrainFlags train;
};

int cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("evaluate", argv);
  const TrainConfig config = a.train.resolved();
  ensure_dir(a.out_dir);
  const fs::path out(a.out_dir);

  auto t0 = Clock::now();
  const Corpus raw = load_corpus_file(a.corpus_path, a.ingest.options());
  const Corpus corpus = filter_by_link_count(raw, a.min_links);
  manifest.lap("ingest_seconds", t0);
  std::cout << "link filter (min " << a.min_links << "): " << raw.num_docs() << " -> " << corpus.num_docs()
            << " documents\n";

  t0 = Clock::now();
  const HeldoutReport cv = run_cv(corpus, config, a.folds, a.split_seed);
  manifest.lap("cv_seconds", t0);
  std::ostringstream heldout;
  heldout << "fold,text_ll,link_ll,total\n";
  for (const auto& f : cv.per_fold)
    heldout << f.fold << ',' << fmt_real(f.text_loglik) << ',' << fmt_real(f.link_loglik) << ','
            << fmt_real(f.total) << '\n';
  write_file(out / "heldout.csv", heldout.str());

  t0 = Clock::now();
  const TrainedModel full = train(corpus, config);
  manifest.lap("full_fit_seconds", t0);
  const CoherenceReport word_coh = word_topic_coherence(full.params, corpus, a.coherence_m);
  auto coherence_csv = [](const CoherenceReport& r) {
    std::ostringstream os;
    os << "topic_id,score\n";
    for (const auto& [k, s] : r.per_topic) os << k << ',' << fmt_real(s) << '\n';
    return os.str();
  };
  write_file(out / "coherence_word.csv", coherence_csv(word_coh));
  json summary{{"documents", corpus.num_docs()},
               {"folds", cv.n_folds},
               {"min_links", a.min_links},
               {"heldout",
                {{"mean_text_ll", cv.mean_text}, {"mean_link_ll", cv.mean_link}, {"mean_total", cv.mean_total}}},
               {"word_topic_coherence", {{"mean", word_coh.mean}, {"top_words", word_coh.top_words_used}}}};
  std::vector<std::string> outputs{(out / "heldout.csv").string(), (out / "coherence_word.csv").string()};
  if (corpus.total_link_tokens() > 0 && config.use_links) {
    const CoherenceReport doc_coh = doc_topic_coherence(full.params, corpus, a.coherence_m);
    write_file(out / "coherence_doc.csv", coherence_csv(doc_coh));
    summary["doc_topic_coherence"] = {{"mean", doc_coh.mean}, {"top_words", doc_coh.top_words_used}};
    outputs.push_back((out / "coherence_doc.csv").string());
  } else {
    std::cerr << "warning: no link tokens; DocTopic coherence skipped\n";
  }
  write_file(out / "summary.json", summary.dump(1) + "\n");
  outputs.push_back((out / "summary.json").string());

  manifest.doc["config"] = config_json(config);
  manifest.doc["config"]["folds"] = a.folds;
  manifest.doc["config"]["min_links"] = a.min_links;
  manifest.doc["config"]["split_seed"] = a.split_seed;
  manifest.doc["config"]["coherence_m"] = a.coherence_m;
  manifest.doc["seed"] = config.seed;
  manifest.doc["inputs"] = {{"corpus", a.corpus_path}, {"min_count", a.ingest.min_count}, {"tokenize", a.ingest.tokenize}};
  manifest.doc["corpus_hash"] = hex64(corpus_hash(corpus));
  manifest.doc["model_hash"] = hex64(fnv1a64(serialize_checkpoint(full)));
  manifest.doc["outputs"] = outputs;
  manifest.write(out / "manifest.json");

  std::cout << "held-out mean total " << fmt_real(cv.mean_total) << " over " << cv.n_folds
            << " folds; mean WordTopic coherence " << fmt_real(word_coh.mean) << "\n";
  return 0;
}

// ---- select-k ------------------------------------------------------------------------------

struct SelectArgs {
  std::string corpus_path;
  std::vector<std::size_t> candidates{50, 70, 90, 110, 130, 150};
  std::size_t coherence_m = 10;
  IngestFlags ingest;
  TrainFlags train;
};

int cmd_select_k(const SelectArgs& a) {
  const Corpus corpus = load_corpus_file(a.corpus_path, a.ingest.options());
  const TopicNumberSelection sel = select_topic_number(corpus, a.candidates, a.train.resolved(), a.coherence_m);
  std::cout << "k,mean_coherence\n";
  for (const auto& [k, s] : sel.mean_coherence) std::cout << k << ',' << fmt_real(s) << '\n';
  std::cout << "selected " << sel.best << "\n";
  return 0;
}

// ---- ingest --------------------------------------------------------------------------------

struct IngestArgs {
  std::string input;
  std::string out = "corpus.tac";
  IngestFlags ingest;
};

int cmd_ingest(const IngestArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("ingest", argv);
  IngestStats stats;
  const Corpus corpus = load_corpus_file(a.input, a.ingest.options(), &stats);
  const std::string bytes = serialize_corpus(corpus);
  write_file(a.out, bytes);
  manifest.doc["inputs"] = {{"corpus", a.input}, {"min_count", a.ingest.min_count}, {"tokenize", a.ingest.tokenize}};
  manifest.doc["corpus_hash"] = hex64(fnv1a64(bytes));
  manifest.doc["outputs"] = {a.out};
  manifest.doc["ingest"] = {{"documents", corpus.num_docs()},
                            {"vocabulary", corpus.vocab_size()},
                            {"link_tokens", corpus.total_link_tokens()},
                            {"dropped_unknown_links", stats.dropped_unknown_links},
                            {"dropped_self_links", stats.dropped_self_links}};
  fs::path manifest_path(a.out);
  manifest_path.replace_extension(".manifest.json");
  manifest.write(manifest_path);
  std::cout << corpus.num_docs() << " documents, " << corpus.vocab_size() << " terms, "
            << corpus.total_link_tokens() << " link tokens (" << stats.dropped_unknown_links
            << " dropped as unknown)\n";
  return 0;
}

// ---- serve ---------------------------------------------------------------------------------

struct ServeArgs {
  std::string graph_path;
  std::string model_path;
  std::string corpus_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui_dir = TOPICATLAS_UI_DIR;
  IngestFlags ingest;
};

int cmd_serve(const ServeArgs& a) {
  std::string bytes = read_file(a.graph_path);
  if (const std::string problem = validate_graph_json(bytes); !problem.empty())
    throw ValidationError("graph '" + a.graph_path + "' is invalid: " + problem);
  std::optional<Corpus> corpus;
  std::optional<Matrix> theta;
  if (!a.corpus_path.empty()) corpus = load_corpus_file(a.corpus_path, a.ingest.options());
  if (!a.model_path.empty()) {
    if (!corpus) throw ValidationError("--model requires --corpus");
    const TrainedModel model = load_checkpoint(a.model_path);
    if (model.corpus_hash != corpus_hash(*corpus)) throw ValidationError("model and corpus hashes differ");
    theta = posterior_theta(model);
  }
  const GraphService service(std::move(bytes), std::move(corpus), std::move(theta));
  ApiServer server(service, a.ui_dir);
  const int port = server.bind(a.host, a.port);
  if (port < 0) throw Error("cannot bind " + a.host + ":" + std::to_string(a.port));
  std::cout << "serving on http://" << a.host << ":" << port << "/" << std::endl;
  return server.listen() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
  apply_thread_cap();
  std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Topic webs for text networks: fit, export, evaluate and explore"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Fit a model and write a checkpoint");
  train_cmd->add_option("corpus,--corpus", train_args.corpus_path, "JSONL records or corpus dump")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_args.out_dir, "Output directory")->capture_default_str();
  add_ingest_flags(*train_cmd, train_args.ingest);
  add_train_flags(*train_cmd, train_args.train);

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export-web", "Build the topic web and write graph JSON");
  export_cmd->add_option("--model", export_args.model_path, "Checkpoint from train")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--corpus", export_args.corpus_path, "Corpus the model was trained on")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", export_args.out_path, "Graph JSON output path")->capture_default_str();
  export_cmd->add_option("--prior", export_args.prior, "Prior edge probability, or 'auto' for 1/(K_w*K_y)")
      ->capture_default_str();
  export_cmd->add_option("--threshold", export_args.threshold, "Drop edges with weight below this")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  export_cmd->add_option("--keywords", export_args.keywords, "Keywords per WordTopic")->capture_default_str();
  export_cmd->add_option("--top-docs", export_args.top_docs, "Representative documents per DocTopic")
      ->capture_default_str();
  export_cmd->add_option("--indicative", export_args.indicative, "Indicative words per DocTopic")
      ->capture_default_str();
  add_ingest_flags(*export_cmd, export_args.ingest);

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Cross-validated held-out likelihood and topic coherence");
  eval_cmd->add_option("corpus,--corpus", eval_args.corpus_path, "JSONL records or corpus dump")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_args.out_dir, "Output directory")->capture_default_str();
  eval_cmd->add_option("--folds", eval_args.folds, "Number of folds")->check(CLI::Range(2, 1000))->capture_default_str();
  eval_cmd->add_option("--min-links", eval_args.min_links, "Drop documents with fewer links")->capture_default_str();
  eval_cmd->add_option("--split-seed", eval_args.split_seed, "Seed for the fold permutation")->capture_default_str();
  eval_cmd->add_option("--coherence-m", eval_args.coherence_m, "Top words per topic for coherence")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  add_ingest_flags(*eval_cmd, eval_args.ingest);
  add_train_flags(*eval_cmd, eval_args.train);

  SelectArgs select_args;
  auto* select_cmd = app.add_subcommand("select-k", "Pick the topic number with the best text-only coherence");
  select_cmd->add_option("corpus,--corpus", select_args.corpus_path, "JSONL records or corpus dump")->required()->check(CLI::ExistingFile);
  select_cmd->add_option("--candidates", select_args.candidates, "Candidate topic numbers")
      ->delimiter(',')
      ->capture_default_str();
  select_cmd->add_option("--coherence-m", select_args.coherence_m, "Top words per topic")->capture_default_str();
  add_ingest_flags(*select_cmd, select_args.ingest);
  add_train_flags(*select_cmd, select_args.train);

  IngestArgs ingest_args;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert JSONL records into a corpus dump");
  ingest_cmd->add_option("input,--input", ingest_args.input, "JSONL records")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ingest_args.out, "Corpus dump path")->capture_default_str();
  add_ingest_flags(*ingest_cmd, ingest_args.ingest);

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the exploration UI and the read-only API");
  serve_cmd->add_option("graph,--graph", serve_args.graph_path, "Graph JSON from export-web")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--model", serve_args.model_path, "Checkpoint, enables theta rows in /api/doc");
  serve_cmd->add_option("--corpus", serve_args.corpus_path, "Corpus, enables /api/doc and document snippets");
  serve_cmd->add_option("--host", serve_args.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", serve_args.port, "Port (0 picks a free one)")->capture_default_str();
  serve_cmd->add_option("--ui", serve_args.ui_dir, "Static UI bundle directory")->capture_default_str();
  add_ingest_flags(*serve_cmd, serve_args.ingest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*train_cmd) return cmd_train(train_args, args);
    if (*export_cmd) return cmd_export_web(export_args, args);
    if (*eval_cmd) return cmd_evaluate(eval_args, args);
    if (*select_cmd) return cmd_select_k(select_args);
    if (*ingest_cmd) return cmd_ingest(ingest_args, args);
    if (*serve_cmd) return cmd_serve(serve_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace topicatlas::cli
