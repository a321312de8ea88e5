#include "topicatlas/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topicatlas/error.hpp"
#include "topicatlas/hash.hpp"

namespace topicatlas {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "topicatlas-model";

json rows_of(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return out;
}

Matrix matrix_from(const json& j, std::size_t rows, std::size_t cols, const char* name) {
  if (!j.is_array() || j.size() != rows) throw ParseError(std::string("checkpoint: bad row count for ") + name);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = j[r].get<std::vector<double>>();
    if (row.size() != cols) throw ParseError(std::string("checkpoint: bad column count for ") + name);
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

json config_json(const TrainConfig& c) {
  return json{{"kw", c.num_word_topics},
              {"ky", c.num_doc_topics},
              {"alpha_init", c.alpha_init},
              {"inner_tol", c.inner_tol},
              {"inner_max_iters", c.inner_max_iters},
              {"outer_tol", c.outer_tol},
              {"outer_max_iters", c.outer_max_iters},
              {"smoothing_eps", c.smoothing_eps},
              {"seed", c.seed},
              {"update_alpha", c.update_alpha},
              {"use_links", c.use_links},
              {"warm_start", c.warm_start}};
}

TrainConfig config_from(const json& j) {
  TrainConfig c;
  c.num_word_topics = j.at("kw").get<std::size_t>();
  c.num_doc_topics = j.at("ky").get<std::size_t>();
  c.alpha_init = j.at("alpha_init").get<double>();
  c.inner_tol = j.at("inner_tol").get<double>();
  c.inner_max_iters = j.at("inner_max_iters").get<int>();
  c.outer_tol = j.at("outer_tol").get<double>();
  c.outer_max_iters = j.at("outer_max_iters").get<int>();
  c.smoothing_eps = j.at("smoothing_eps").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.update_alpha = j.at("update_alpha").get<bool>();
  c.use_links = j.at("use_links").get<bool>();
  c.warm_start = j.value("warm_start", true);
  return c;
}

}  // namespace

std::string serialize_checkpoint(const TrainedModel& model) {
  const ModelParams& p = model.params;
  json docs{{"indices", model.doc_indices}, {"gamma", json::array()}, {"word_topic_counts", json::array()},
            {"link_topic_counts", json::array()}};
  for (const auto& s : model.summaries) {
    docs["gamma"].push_back(s.gamma);
    docs["word_topic_counts"].push_back(s.word_topic_counts);
    docs["link_topic_counts"].push_back(s.link_topic_counts);
  }
  json j{{"format", kFormat},
         {"version", kCheckpointVersion},
         {"dims",
          {{"kw", p.num_word_topics()}, {"ky", p.num_doc_topics()}, {"vocab", p.vocab_size()}, {"docs", p.num_docs()}}},
         {"alpha", p.alpha},
         {"beta", rows_of(p.beta)},
         {"eta", rows_of(p.eta)},
         {"omega", rows_of(p.omega)},
         {"config", config_json(model.config)},
         {"corpus_hash", hex64(model.corpus_hash)},
         {"elbo_trace", model.elbo_trace},
         {"alpha_warning", model.alpha_warning},
         {"documents", docs}};
  return j.dump() + "\n";
}

TrainedModel parse_checkpoint(const std::string& text) {
  TrainedModel m;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kFormat) throw ParseError("checkpoint: unknown format tag");
    if (j.at("version").get<int>() != kCheckpointVersion) throw ParseError("checkpoint: unsupported version");
    const json& dims = j.at("dims");
    const auto kw = dims.at("kw").get<std::size_t>();
    const auto ky = dims.at("ky").get<std::size_t>();
    const auto v = dims.at("vocab").get<std::size_t>();
    const auto d = dims.at("docs").get<std::size_t>();
    m.params.alpha = j.at("alpha").get<std::vector<double>>();
    if (m.params.alpha.size() != kw) throw ParseError("checkpoint: alpha length mismatch");
    m.params.beta = matrix_from(j.at("beta"), kw, v, "beta");
    m.params.eta = matrix_from(j.at("eta"), kw, ky, "eta");
    m.params.omega = matrix_from(j.at("omega"), ky, d, "omega");
    m.config = config_from(j.at("config"));
    m.corpus_hash = std::stoull(j.at("corpus_hash").get<std::string>(), nullptr, 16);
    m.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
    m.alpha_warning = j.at("alpha_warning").get<bool>();
    const json& docs = j.at("documents");
    m.doc_indices = docs.at("indices").get<std::vector<DocIndex>>();
    const auto& g = docs.at("gamma");
    const auto& wc = docs.at("word_topic_counts");
    const auto& lc = docs.at("link_topic_counts");
    if (g.size() != m.doc_indices.size() || wc.size() != g.size() || lc.size() != g.size())
      throw ParseError("checkpoint: document summary length mismatch");
    for (std::size_t i = 0; i < g.size(); ++i) {
      DocSummary s{g[i].get<std::vector<double>>(), wc[i].get<std::vector<double>>(),
                   lc[i].get<std::vector<double>>()};
      if (s.gamma.size() != kw || s.word_topic_counts.size() != kw || s.link_topic_counts.size() != ky)
        throw ParseError("checkpoint: document summary width mismatch");
      m.summaries.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what());
  }
  m.params.validate(1e-6);
  return m;
}

void save_checkpoint(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  out << serialize_checkpoint(model);
  if (!out) throw Error("failed writing checkpoint '" + path + "'");
}

TrainedModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace topicatlas
