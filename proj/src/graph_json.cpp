#include "topicatlas/graph_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>

#include <json.hpp>

#include "topicatlas/error.hpp"

namespace topicatlas {

using nlohmann::json;

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

const char* to_string(NodeKind kind) { return kind == NodeKind::kWord ? "word" : "doc"; }

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kWordWord: return "ww";
    case EdgeKind::kDocDoc: return "dd";
    case EdgeKind::kWordDoc: return "wd";
  }
  return "?";
}

namespace {

NodeKind node_kind_from(const std::string& s) {
  if (s == "word") return NodeKind::kWord;
  if (s == "doc") return NodeKind::kDoc;
  throw ParseError("graph: unknown node kind '" + s + "'");
}

EdgeKind edge_kind_from(const std::string& s) {
  if (s == "ww") return EdgeKind::kWordWord;
  if (s == "dd") return EdgeKind::kDocDoc;
  if (s == "wd") return EdgeKind::kWordDoc;
  throw ParseError("graph: unknown edge kind '" + s + "'");
}

std::size_t index_from_id(const std::string& id) { return std::stoul(id.substr(1)); }

}  // namespace

std::string export_graph(const TopicWeb& web) {
  json nodes = json::array();
  for (const auto& n : web.nodes) {
    json top_docs = json::array();
    for (const auto& td : n.top_docs) top_docs.push_back({{"doc", td.doc}, {"weight", round_significant(td.weight)}});
    nodes.push_back({{"id", n.id()},
                     {"kind", to_string(n.kind)},
                     {"dominance", round_significant(n.dominance)},
                     {"keywords", n.keywords},
                     {"top_docs", top_docs}});
  }
  json edges = json::array();
  for (const auto& e : web.edges) {
    edges.push_back({{"kind", to_string(e.kind)},
                     {"src", e.src},
                     {"dst", e.dst},
                     {"cooccurrence", round_significant(e.cooccurrence)},
                     {"weight", round_significant(e.weight)}});
  }
  json doc{{"meta",
            {{"kw", web.num_word_topics},
             {"ky", web.num_doc_topics},
             {"prior", round_significant(web.prior)},
             {"threshold", round_significant(web.threshold)},
             {"model_hash", web.model_hash}}},
           {"nodes", nodes},
           {"edges", edges}};
  return doc.dump(1) + "\n";
}

TopicWeb parse_graph(const std::string& text) {
  TopicWeb web;
  try {
    const json doc = json::parse(text);
    const json& meta = doc.at("meta");
    web.num_word_topics = meta.at("kw").get<std::size_t>();
    web.num_doc_topics = meta.at("ky").get<std::size_t>();
    web.prior = meta.at("prior").get<double>();
    web.threshold = meta.at("threshold").get<double>();
    web.model_hash = meta.at("model_hash").get<std::string>();
    for (const auto& n : doc.at("nodes")) {
      TopicNode node;
      node.kind = node_kind_from(n.at("kind").get<std::string>());
      const auto id = n.at("id").get<std::string>();
      node.index = index_from_id(id);
      node.dominance = n.at("dominance").get<double>();
      node.keywords = n.at("keywords").get<std::vector<std::string>>();
      for (const auto& td : n.at("top_docs"))
        node.top_docs.push_back({td.at("doc").get<std::string>(), td.at("weight").get<double>()});
      if (node.id() != id) throw ParseError("graph: node id '" + id + "' does not match its kind");
      web.nodes.push_back(std::move(node));
    }
    for (const auto& e : doc.at("edges")) {
      web.edges.push_back({edge_kind_from(e.at("kind").get<std::string>()), e.at("src").get<std::string>(),
                           e.at("dst").get<std::string>(), e.at("cooccurrence").get<double>(),
                           e.at("weight").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph: ") + e.what());
  } catch (const std::logic_error& e) {  // stoul on a malformed id
    throw ParseError(std::string("graph: malformed node id (") + e.what() + ")");
  }
  return web;
}

void write_graph_file(const std::string& path, const TopicWeb& web) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph '" + path + "'");
  out << export_graph(web);
  if (!out) throw Error("failed writing graph '" + path + "'");
}

namespace {

std::string validate_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    return std::string("not JSON: ") + e.what();
  }
  if (!doc.is_object()) return "top level is not an object";
  for (const char* key : {"meta", "nodes", "edges"})
    if (!doc.contains(key)) return std::string("missing key '") + key + "'";
  const json& meta = doc["meta"];
  for (const char* key : {"kw", "ky", "prior", "threshold", "model_hash"})
    if (!meta.contains(key)) return std::string("meta missing '") + key + "'";
  if (!meta["kw"].is_number_unsigned() || !meta["ky"].is_number_unsigned()) return "meta kw/ky must be counts";
  if (!meta["prior"].is_number() || !(meta["prior"].get<double>() > 0.0)) return "meta prior must be positive";

  static const std::regex id_re("^[wd](0|[1-9][0-9]*)$");
  std::set<std::string> ids;
  std::size_t words = 0, docs = 0;
  double word_mass = 0.0, doc_mass = 0.0;
  if (!doc["nodes"].is_array()) return "nodes must be an array";
  for (const auto& n : doc["nodes"]) {
    for (const char* key : {"id", "kind", "dominance", "keywords", "top_docs"})
      if (!n.contains(key)) return std::string("node missing '") + key + "'";
    const auto id = n["id"].get<std::string>();
    if (!std::regex_match(id, id_re)) return "malformed node id '" + id + "'";
    const auto kind = n["kind"].get<std::string>();
    if ((kind == "word") != (id[0] == 'w') || (kind != "word" && kind != "doc")) return "node kind mismatch for " + id;
    if (!ids.insert(id).second) return "duplicate node id " + id;
    const double dom = n["dominance"].get<double>();
    if (!(dom >= 0.0 && dom <= 1.0)) return "dominance out of [0,1] for " + id;
    (kind == "word" ? word_mass : doc_mass) += dom;
    (kind == "word" ? words : docs) += 1;
  }
  if (words != meta["kw"].get<std::size_t>() || docs != meta["ky"].get<std::size_t>())
    return "node counts do not match meta kw/ky";
  if (words > 0 && std::abs(word_mass - 1.0) > 1e-6) return "word dominances do not sum to 1";
  if (docs > 0 && std::abs(doc_mass - 1.0) > 1e-6) return "doc dominances do not sum to 1";

  if (!doc["edges"].is_array()) return "edges must be an array";
  const double threshold = meta["threshold"].get<double>();
  for (const auto& e : doc["edges"]) {
    for (const char* key : {"kind", "src", "dst", "cooccurrence", "weight"})
      if (!e.contains(key)) return std::string("edge missing '") + key + "'";
    const auto kind = e["kind"].get<std::string>();
    const auto src = e["src"].get<std::string>();
    const auto dst = e["dst"].get<std::string>();
    if (!ids.contains(src) || !ids.contains(dst)) return "edge references unknown node " + src + "-" + dst;
    const std::string want = kind == "ww" ? "ww" : kind == "dd" ? "dd" : kind == "wd" ? "wd" : "";
    if (want.empty()) return "unknown edge kind '" + kind + "'";
    const char src_kind = kind == "dd" ? 'd' : 'w';
    const char dst_kind = kind == "ww" ? 'w' : 'd';
    if (src[0] != src_kind || dst[0] != dst_kind) return "edge endpoints do not match kind " + kind;
    const double co = e["cooccurrence"].get<double>();
    const double w = e["weight"].get<double>();
    if (!(co >= 0.0 && co <= 1.0)) return "cooccurrence out of [0,1]";
    if (!(w >= 0.0)) return "negative edge weight";
    if (w < threshold) return "edge below the pruning threshold";
  }
  return {};
}

}  // namespace

std::string validate_graph_json(const std::string& text) {
  try {
    return validate_document(text);
  } catch (const json::exception& e) {
    return std::string("wrong value type: ") + e.what();
  }
}

}  // namespace topicatlas
