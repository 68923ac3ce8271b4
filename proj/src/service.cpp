#include "semgraph/service.hpp"

#include <charconv>
#include <optional>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "semgraph/dot.hpp"
#include "semgraph/interchange.hpp"
#include "semgraph/matcher.hpp"
#include "semgraph/query.hpp"

namespace semgraph {

using json = nlohmann::ordered_json;

namespace {

HttpResponse reply(int status, const json& body) { return {status, "application/json", body.dump(2) + "\n"}; }

HttpResponse error(int status, std::string message) {
  return reply(status, json{{"error", {{"message", std::move(message)}}}});
}

HttpResponse query_error(const query::QueryError& err, std::string_view source) {
  json e = {{"kind", err.kind_name()},
            {"message", err.message()},
            {"line", err.position().line},
            {"col", err.position().col},
            {"expected", err.expected()},
            {"annotated", err.annotate(source)}};
  return reply(422, json{{"error", e}});
}

// Non-negative integer field with a default; nullopt on a bad value.
std::optional<std::size_t> count_field(const nlohmann::json& doc, const char* key, std::size_t fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  if (it->is_number_unsigned()) return it->get<std::size_t>();
  if (it->is_number_integer() && it->get<long long>() >= 0) return static_cast<std::size_t>(it->get<long long>());
  return std::nullopt;
}

json bindings(const SemGraph& g, const Occurrence& occ) {
  auto ids = interchange::node_ids(g);
  json nodes = json::object();
  for (const auto& [ident, n] : occ.nodes) nodes[ident] = ids[n.index];
  json edges = json::object();
  for (const auto& [ident, e] : occ.edges) {
    const Edge& edge = g.edge(e);
    edges[ident] = {{"source", ids[edge.source.index]},
                    {"target", ids[edge.target.index]},
                    {"label", edge.label_text()}};
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

}  // namespace

Service::Service(std::shared_ptr<const Registry> registry, ServiceOptions options)
    : registry_(registry ? std::move(registry) : std::make_shared<const Registry>()), options_(options) {}

void Service::swap_registry(std::shared_ptr<const Registry> registry) {
  std::lock_guard lock(mu_);
  registry_ = registry ? std::move(registry) : std::make_shared<const Registry>();
}

std::shared_ptr<const Registry> Service::registry() const {
  std::lock_guard lock(mu_);
  return registry_;
}

HttpResponse Service::list_corpora() const {
  auto reg = registry();
  json out = json::array();
  for (const auto& e : reg->entries())
    out.push_back({{"id", e.spec.id},
                   {"format", format_name(e.spec.format)},
                   {"language", e.spec.language.empty() ? json(nullptr) : json(e.spec.language)},
                   {"graphs", e.corpus->size()},
                   {"skipped", e.report.skipped.size()}});
  return reply(200, out);
}

HttpResponse Service::stats(std::string_view corpus_id) const {
  auto reg = registry();
  const CorpusEntry* entry = reg->find(corpus_id);
  if (!entry) return error(404, "unknown corpus: " + std::string(corpus_id));
  CorpusStats s = compute_stats(*entry->corpus);
  json labels = json::array();
  std::vector<std::pair<std::string, std::size_t>> rows(s.labels.begin(), s.labels.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [label, n] : rows) labels.push_back({{"label", label}, {"count", n}});
  return reply(200, json{{"graphs", s.graphs}, {"nodes", s.nodes}, {"edges", s.edges}, {"cyclic", s.cyclic},
                         {"labels", labels}});
}

HttpResponse Service::search(std::string_view corpus_id, std::string_view body) const {
  auto reg = registry();
  const CorpusEntry* entry = reg->find(corpus_id);
  if (!entry) return error(404, "unknown corpus: " + std::string(corpus_id));

  nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return error(400, "body must be a JSON object");
  auto req_it = doc.find("request");
  if (req_it == doc.end() || !req_it->is_string()) return error(400, "`request` must be a string");
  auto limit = count_field(doc, "limit", options_.default_limit);
  auto offset = count_field(doc, "offset", 0);
  if (!limit || !offset) return error(400, "`limit` and `offset` must be non-negative integers");
  if (*limit > options_.max_limit) return error(400, "`limit` exceeds " + std::to_string(options_.max_limit));
  std::optional<std::string> cluster_text, cluster_value;
  if (auto it = doc.find("cluster"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) return error(400, "`cluster` must be a string");
    cluster_text = it->get<std::string>();
  }
  if (auto it = doc.find("cluster_value"); it != doc.end() && !it->is_null()) {
    if (!it->is_string() || !cluster_text) return error(400, "`cluster_value` needs a string and a `cluster` key");
    cluster_value = it->get<std::string>();
  }

  const std::string source = req_it->get<std::string>();
  query::Request request;
  std::optional<query::ClusterKey> key;
  try {
    request = query::parse_request(source);
  } catch (const query::QueryError& err) {
    return query_error(err, source);
  }
  if (cluster_text) {
    try {
      key = query::parse_cluster_key(*cluster_text, request);
    } catch (const query::QueryError& err) {
      return query_error(err, *cluster_text);
    }
  }

  MatchOptions opts;
  opts.deadline = std::chrono::steady_clock::now() + options_.budget;
  const Corpus& corpus = *entry->corpus;
  std::vector<Occurrence> occs;
  std::vector<std::string> values;
  ClusterTable table;
  try {
    Matcher matcher(request);
    std::optional<ClusterEvaluator> eval;
    if (key) {
      eval.emplace(matcher, *key);
      table.key = *key;
      if (key->kind == query::ClusterKey::Kind::Whether) table.rows = {{"no", 0}, {"yes", 0}};
    }
    matcher.for_each(corpus, entry->index.get(), opts, [&](Occurrence&& occ) {
      if (eval) {
        std::string v = eval->value(corpus[occ.graph_index], occ, opts);
        ++table.rows[v];
        values.push_back(std::move(v));
      }
      occs.push_back(std::move(occ));
    });
  } catch (const BudgetExceeded&) {
    return reply(503, json{{"error", {{"message", "match budget exceeded"}}}, {"partial", false}});
  }

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < occs.size(); ++i)
    if (!cluster_value || values[i] == *cluster_value) selected.push_back(i);

  json items = json::array();
  for (std::size_t k = *offset; k < selected.size() && k - *offset < *limit; ++k) {
    const Occurrence& occ = occs[selected[k]];
    const SemGraph& g = corpus[occ.graph_index];
    Highlight hl = highlight_of(occ);
    json item = {{"sent_id", occ.sent_id}, {"text", g.text()}, {"bindings", bindings(g, occ)}};
    if (key) item["cluster"] = values[selected[k]];
    item["dot"] = to_dot(g, &hl);
    items.push_back(std::move(item));
  }

  json out = {{"total", occs.size()}};
  if (key) {
    json rows = json::array();
    for (const auto& row : table.sorted()) rows.push_back({{"value", row.value}, {"count", row.count}});
    out["clusters"] = rows;
  }
  if (cluster_value) out["selected"] = selected.size();
  out["offset"] = *offset;
  out["limit"] = *limit;
  out["items"] = std::move(items);
  out["partial"] = false;
  return reply(200, out);
}

HttpResponse Service::graph(std::string_view corpus_id, std::string_view sent_id, std::string_view format) const {
  auto reg = registry();
  const CorpusEntry* entry = reg->find(corpus_id);
  if (!entry) return error(404, "unknown corpus: " + std::string(corpus_id));
  auto idx = entry->corpus->find(sent_id);
  if (!idx) return error(404, "unknown sentence: " + std::string(sent_id));
  const SemGraph& g = (*entry->corpus)[*idx];
  if (format.empty() || format == "interchange") return {200, "application/json", interchange::write_graph(g)};
  if (format == "dot") return {200, "text/vnd.graphviz; charset=utf-8", to_dot(g)};
  return error(400, "unknown format `" + std::string(format) + "` (expected interchange or dot)");
}

std::pair<std::string, int> parse_listen(std::string_view spec) {
  std::string host = "127.0.0.1";
  std::string_view port_text = spec;
  if (auto colon = spec.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(spec.substr(0, colon));
    port_text = spec.substr(colon + 1);
  }
  int port = -1;
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || p != port_text.data() + port_text.size() || port < 0 || port > 65535)
    throw std::invalid_argument("bad listen address `" + std::string(spec) + "` (expected host:port)");
  return {host, port};
}

struct HttpServer::Impl {
  const Service& service;
  httplib::Server server;

  explicit Impl(const Service& s) : service(s) {
    auto send = [](httplib::Response& res, const HttpResponse& r) {
      res.status = r.status;
      res.set_content(r.body, r.content_type);
    };
    if (service.options().cors) {
      server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                  {"Access-Control-Allow-Headers", "Content-Type"}});
      server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    }
    server.Get("/corpora", [this, send](const httplib::Request&, httplib::Response& res) {
      send(res, service.list_corpora());
    });
    server.Get(R"(/corpora/([^/]+)/stats)", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.stats(req.matches[1].str()));
    });
    server.Post(R"(/corpora/([^/]+)/search)", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, service.search(req.matches[1].str(), req.body));
    });
    // sent ids such as pXX/dYYYY contain a slash
    server.Get(R"(/corpora/([^/]+)/graphs/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
      std::string format = req.has_param("format") ? req.get_param_value("format") : "";
      send(res, service.graph(req.matches[1].str(), req.matches[2].str(), format));
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) res.set_content(json{{"error", {{"message", "not found"}}}}.dump(2) + "\n", "application/json");
    });
  }
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace semgraph
