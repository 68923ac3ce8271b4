#ifndef SEMGRAPH_SERVICE_HPP
#define SEMGRAPH_SERVICE_HPP

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "semgraph/corpus_manager.hpp"

namespace semgraph {

struct ServiceOptions {
  std::chrono::milliseconds budget{10'000};  // per search request
  bool cors = true;
  std::size_t default_limit = 20;
  std::size_t max_limit = 1000;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Request handlers over a shared registry, independent of the transport.
///
///   GET  /corpora                               list_corpora
///   GET  /corpora/{id}/stats                    stats
///   POST /corpora/{id}/search                   search (JSON body)
///   GET  /corpora/{id}/graphs/{sent_id}?format= graph
class Service {
 public:
  explicit Service(std::shared_ptr<const Registry> registry, ServiceOptions options = {});

  HttpResponse list_corpora() const;
  HttpResponse stats(std::string_view corpus_id) const;
  /// Body: {"request": text, "cluster"?: text, "cluster_value"?: text,
  /// "limit"?: int, "offset"?: int}.
  HttpResponse search(std::string_view corpus_id, std::string_view body) const;
  /// format: "interchange" (default when empty) or "dot".
  HttpResponse graph(std::string_view corpus_id, std::string_view sent_id, std::string_view format) const;

  /// Replaces the registry; in-flight requests keep the one they started with.
  void swap_registry(std::shared_ptr<const Registry> registry);
  std::shared_ptr<const Registry> registry() const;
  const ServiceOptions& options() const { return options_; }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const Registry> registry_;
  ServiceOptions options_;
};

/// `host:port`, `:port` or `port`. Throws std::invalid_argument.
std::pair<std::string, int> parse_listen(std::string_view spec);

/// HTTP/1.1 front end for a Service.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semgraph

#endif  // SEMGRAPH_SERVICE_HPP
