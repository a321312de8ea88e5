#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "topicatlas/corpus.hpp"
#include "topicatlas/matrix.hpp"
#include "topicatlas/topicweb.hpp"

namespace topicatlas::cli {

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Read-only request handling behind `serve`, independent of the socket layer.
class GraphService {
 public:
  /// `graph_bytes` is served verbatim from /api/graph. `corpus` and `theta` enable document
  /// snippets and /api/doc; theta must have one row per corpus document.
  GraphService(std::string graph_bytes, std::optional<Corpus> corpus = std::nullopt,
               std::optional<Matrix> theta = std::nullopt);

  HttpReply graph() const;
  HttpReply topic(const std::string& id) const;
  HttpReply document(const std::string& id) const;

  const TopicWeb& web() const { return web_; }

 private:
  std::string graph_bytes_;
  TopicWeb web_;
  std::optional<Corpus> corpus_;
  std::optional<Matrix> theta_;
};

/// HTTP front end: the UI bundle (when `ui_dir` holds an index.html) plus the /api routes.
class ApiServer {
 public:
  ApiServer(const GraphService& service, std::string ui_dir);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds host:port (port 0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace topicatlas::cli
