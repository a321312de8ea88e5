#include "server.hpp"

#include <algorithm>
#include <filesystem>
#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "topicatlas/error.hpp"
#include "topicatlas/graph_json.hpp"

namespace topicatlas::cli {

using nlohmann::json;

namespace {

HttpReply error_reply(int status, const std::string& message) {
  return {status, "application/json", json{{"error", message}}.dump() + "\n"};
}

HttpReply json_reply(const json& j) { return {200, "application/json", j.dump(1) + "\n"}; }

const char* kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>TopicAtlas</title></head>"
    "<body><h1>TopicAtlas</h1><p>The UI bundle is not installed. API endpoints: "
    "<a href=\"/api/graph\">/api/graph</a>, /api/topic/{id}, /api/doc/{id}.</p></body></html>\n";

}  // namespace

GraphService::GraphService(std::string graph_bytes, std::optional<Corpus> corpus, std::optional<Matrix> theta)
    : graph_bytes_(std::move(graph_bytes)),
      web_(parse_graph(graph_bytes_)),
      corpus_(std::move(corpus)),
      theta_(std::move(theta)) {
  if (theta_ && (!corpus_ || theta_->rows() != corpus_->num_docs()))
    throw ValidationError("serve: theta rows must match the corpus document count");
}

HttpReply GraphService::graph() const { return {200, "application/json", graph_bytes_}; }

HttpReply GraphService::topic(const std::string& id) const {
  static const std::regex id_re("^[wd](0|[1-9][0-9]{0,8})$");
  if (!std::regex_match(id, id_re)) return error_reply(400, "malformed topic id '" + id + "'");
  const TopicNode* node = web_.find_node(id);
  if (!node) return error_reply(404, "topic not found: " + id);

  json top_docs = json::array();
  for (const auto& td : node->top_docs) {
    json entry{{"doc", td.doc}, {"weight", round_significant(td.weight)}};
    if (corpus_) {
      if (auto idx = corpus_->find(td.doc)) entry["snippet"] = corpus_->doc(*idx).snippet;
    }
    top_docs.push_back(std::move(entry));
  }

  std::vector<const TopicEdge*> incident;
  for (const auto& e : web_.edges)
    if (e.src == id || e.dst == id) incident.push_back(&e);
  auto other = [&](const TopicEdge* e) { return e->src == id ? e->dst : e->src; };
  std::stable_sort(incident.begin(), incident.end(), [&](const TopicEdge* a, const TopicEdge* b) {
    if (a->weight != b->weight) return a->weight > b->weight;
    return other(a) < other(b);
  });
  json edges = json::array();
  for (const TopicEdge* e : incident) {
    edges.push_back({{"kind", to_string(e->kind)},
                     {"src", e->src},
                     {"dst", e->dst},
                     {"other", other(e)},
                     {"cooccurrence", round_significant(e->cooccurrence)},
                     {"weight", round_significant(e->weight)}});
  }

  json payload{{"id", id},
               {"kind", to_string(node->kind)},
               {"dominance", round_significant(node->dominance)},
               {"keywords", node->keywords},
               {"top_docs", top_docs},
               {"degree", incident.size()},
               {"incident_edges", edges}};
  if (node->kind == NodeKind::kDoc) payload["indicative_words"] = node->keywords;
  return json_reply(payload);
}

HttpReply GraphService::document(const std::string& id) const {
  if (id.empty() || std::any_of(id.begin(), id.end(), [](unsigned char c) { return c < 0x20; }))
    return error_reply(400, "malformed document id");
  if (!corpus_) return error_reply(404, "no corpus loaded; start serve with --corpus");
  const auto idx = corpus_->find(id);
  if (!idx) return error_reply(404, "document not found: " + id);
  const Document& doc = corpus_->doc(*idx);
  json payload{{"id", doc.id},
               {"index", *idx},
               {"snippet", doc.snippet},
               {"num_words", doc.word_tokens.size()},
               {"num_links", doc.link_tokens.size()}};
  if (theta_) {
    json row = json::array();
    for (double t : theta_->row(*idx)) row.push_back(round_significant(t));
    payload["theta"] = row;
  }
  return json_reply(payload);
}

struct ApiServer::Impl {
  httplib::Server server;
};

ApiServer::ApiServer(const GraphService& service, std::string ui_dir) : impl_(std::make_unique<Impl>()) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type.c_str());
  };
  auto& srv = impl_->server;
  srv.Get("/api/graph", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.graph());
  });
  srv.Get(R"(/api/topic/(.*))", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.topic(req.matches[1]));
  });
  srv.Get(R"(/api/doc/(.*))", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.document(req.matches[1]));
  });
  std::error_code ec;
  if (!ui_dir.empty() && std::filesystem::is_regular_file(std::filesystem::path(ui_dir) / "index.html", ec)) {
    srv.set_mount_point("/", ui_dir);
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
}

ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

}  // namespace topicatlas::cli
