#include "cli.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semgraph/corpus_manager.hpp"
#include "semgraph/dot.hpp"
#include "semgraph/interchange.hpp"
#include "semgraph/matcher.hpp"
#include "semgraph/penman.hpp"
#include "semgraph/recipes.hpp"
#include "semgraph/sbn.hpp"
#include "semgraph/service.hpp"

namespace semgraph::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return slurp(in);
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot read " + path);
  return slurp(file);
}

struct Loaded {
  Corpus corpus;
  LoadReport report;
};

Loaded read_graphs(const std::string& text, const std::string& from) {
  if (from == "penman") {
    auto load = penman::parse_corpus(text);
    return {std::move(load.corpus), std::move(load.report)};
  }
  if (from == "interchange") {
    auto load = interchange::parse_corpus(text);
    return {std::move(load.corpus), std::move(load.report)};
  }
  // A bare SBN document, or an archive with `# ::id` headers.
  if (text.find("# ::") != std::string::npos) {
    auto load = sbn::parse_archive(text);
    return {std::move(load.corpus), std::move(load.report)};
  }
  Loaded out;
  try {
    SemGraph g = sbn::parse(text);
    g.meta().set("sent_id", "#1");
    out.corpus.add(std::move(g));
  } catch (const ParseError& e) {
    out.report.skipped.push_back({"#1", e.what()});
  }
  return out;
}

int cmd_convert(const std::string& input, const std::string& from, const std::string& to, const std::string& output,
                std::istream& in, std::ostream& out, std::ostream& err) {
  Loaded loaded = read_graphs(read_input(input, in), from);
  for (const auto& issue : loaded.report.skipped)
    err << (issue.sent_id.empty() ? "input" : issue.sent_id) << ": " << issue.message << "\n";

  std::string text;
  if (to == "dot") {
    for (const SemGraph& g : loaded.corpus) text += to_dot(g);
  } else if (loaded.corpus.size() == 1) {
    text = interchange::write_graph(loaded.corpus[0]);
  } else {
    json arr = json::array();
    for (const SemGraph& g : loaded.corpus) arr.push_back(interchange::to_json(g));
    text = arr.dump(2) + "\n";
  }
  if (output.empty() || output == "-") {
    out << text;
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw InputError("cannot write " + output);
    file << text;
  }
  return loaded.report.ok() ? kOk : kInputError;
}

CorpusEntry load_one(const std::string& config_flag, const std::string& corpus_id, std::ostream& err) {
  auto path = config_path(config_flag);
  if (!path) throw UsageError("no corpus config: pass --config or set SEMGRAPH_CONFIG");
  CorpusConfig cfg = read_config(*path);
  for (const auto& spec : cfg.corpora)
    if (spec.id == corpus_id) {
      CorpusEntry entry = load_corpus(spec);
      for (const auto& issue : entry.report.skipped)
        err << "warning: " << corpus_id << ": skipped " << (issue.sent_id.empty() ? "?" : issue.sent_id) << ": "
            << issue.message << "\n";
      return entry;
    }
  throw UsageError("unknown corpus: " + corpus_id);
}

std::string binding_text(const SemGraph& g, const Occurrence& occ, const std::vector<std::string>& ids) {
  std::string s;
  for (const auto& [ident, n] : occ.nodes) {
    if (!s.empty()) s += ' ';
    s += ident + "=" + ids[n.index];
  }
  for (const auto& [ident, e] : occ.edges) {
    const Edge& edge = g.edge(e);
    if (!s.empty()) s += ' ';
    s += ident + "=" + ids[edge.source.index] + "-[" + std::string(edge.label_text()) + "]->" + ids[edge.target.index];
  }
  return s;
}

struct GrepArgs {
  std::string corpus, request, request_file, cluster;
  bool count = false, as_json = false;
  long budget_ms = 0;
};

int cmd_grep(const std::string& config, const GrepArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.request.empty() && !a.request_file.empty()) throw UsageError("give either --request or --request-file, not both");
  if (a.request.empty() && a.request_file.empty()) throw UsageError("--request or --request-file is required");
  std::string source = a.request;
  if (!a.request_file.empty()) {
    std::ifstream file(a.request_file, std::ios::binary);
    if (!file) throw InputError("cannot read " + a.request_file);
    source = slurp(file);
  }

  query::Request req;
  std::optional<query::ClusterKey> key;
  try {
    req = query::parse_request(source);
    if (!a.cluster.empty()) {
      try {
        key = query::parse_cluster_key(a.cluster, req);
      } catch (const query::QueryError& e) {
        err << "cluster key: " << e.annotate(a.cluster);
        return kInputError;
      }
    }
  } catch (const query::QueryError& e) {
    err << e.annotate(source);
    return kInputError;
  }

  CorpusEntry entry = load_one(config, a.corpus, err);
  const Corpus& corpus = *entry.corpus;
  MatchOptions opts;
  if (a.budget_ms > 0) opts.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(a.budget_ms);

  try {
    if (key) {
      ClusterTable table = cluster(req, *key, corpus, entry.index.get(), opts);
      if (a.as_json) {
        json rows = json::array();
        for (const auto& r : table.sorted()) rows.push_back({{"value", r.value}, {"count", r.count}});
        out << json{{"total", table.total()}, {"key", query::print(*key)}, {"clusters", rows}}.dump(2) << "\n";
      } else if (a.count) {
        out << table.total() << "\n";
      } else {
        std::size_t width = 0;
        for (const auto& r : table.sorted()) width = std::max(width, r.value.size());
        for (const auto& r : table.sorted())
          out << std::left << std::setw(static_cast<int>(width)) << r.value << "  " << r.count << "\n";
      }
      return kOk;
    }

    Matcher matcher(req);
    if (a.count && !a.as_json) {
      std::size_t n = 0;
      matcher.for_each(corpus, entry.index.get(), opts, [&](Occurrence&&) { ++n; });
      out << n << "\n";
      return kOk;
    }
    json items = json::array();
    std::size_t total = 0;
    std::size_t last_graph = static_cast<std::size_t>(-1);
    std::vector<std::string> ids;
    matcher.for_each(corpus, entry.index.get(), opts, [&](Occurrence&& occ) {
      ++total;
      const SemGraph& g = corpus[occ.graph_index];
      if (occ.graph_index != last_graph) {
        ids = interchange::node_ids(g);
        last_graph = occ.graph_index;
      }
      if (a.as_json) {
        if (a.count) return;
        json nodes = json::object(), edges = json::object();
        for (const auto& [ident, n] : occ.nodes) nodes[ident] = ids[n.index];
        for (const auto& [ident, e] : occ.edges) {
          const Edge& edge = g.edge(e);
          edges[ident] = {{"source", ids[edge.source.index]},
                          {"target", ids[edge.target.index]},
                          {"label", edge.label_text()}};
        }
        items.push_back({{"sent_id", occ.sent_id}, {"bindings", {{"nodes", nodes}, {"edges", edges}}}});
      } else {
        out << occ.sent_id << '\t' << binding_text(g, occ, ids) << "\n";
      }
    });
    if (a.as_json) {
      json doc = {{"total", total}};
      if (!a.count) doc["items"] = std::move(items);
      out << doc.dump(2) << "\n";
    }
  } catch (const BudgetExceeded&) {
    err << "match budget of " << a.budget_ms << " ms exceeded\n";
    return kInputError;
  }
  return kOk;
}

int cmd_lint(const std::string& config, const std::string& corpus_id, const std::string& pack_name,
             std::ostream& out, std::ostream& err) {
  try {
    pack(pack_name);
  } catch (const UnknownPack& e) {
    std::string names;
    for (const auto& n : pack_names()) names += (names.empty() ? "" : ", ") + n;
    throw UsageError(std::string(e.what()) + " (available: " + names + ")");
  }
  CorpusEntry entry = load_one(config, corpus_id, err);
  for (const RecipeResult& r : run_pack(pack_name, *entry.corpus, entry.index.get())) {
    out << r.name << ": " << r.occurrences << " occurrence" << (r.occurrences == 1 ? "" : "s") << " in " << r.graphs
        << " graph" << (r.graphs == 1 ? "" : "s");
    if (r.base_occurrences) {
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(1) << 100.0 * r.share();
      out << " (" << pct.str() << "% of " << *r.base_occurrences << ")";
    }
    out << "\n";
    if (!r.samples.empty()) {
      out << "  e.g.";
      for (const auto& s : r.samples) out << ' ' << s;
      out << "\n";
    }
  }
  return kOk;
}

int cmd_stats(const std::string& config, const std::string& corpus_id, bool as_json, std::ostream& out,
              std::ostream& err) {
  CorpusEntry entry = load_one(config, corpus_id, err);
  CorpusStats s = compute_stats(*entry.corpus);
  std::vector<std::pair<std::string, std::size_t>> rows(s.labels.begin(), s.labels.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (as_json) {
    json labels = json::array();
    for (const auto& [label, n] : rows) labels.push_back({{"label", label}, {"count", n}});
    out << json{{"graphs", s.graphs}, {"nodes", s.nodes}, {"edges", s.edges}, {"cyclic", s.cyclic}, {"labels", labels}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << "graphs  " << s.graphs << "\nnodes   " << s.nodes << "\nedges   " << s.edges << "\ncyclic  " << s.cyclic
      << "\n";
  for (const auto& [label, n] : rows) out << "  " << label << "  " << n << "\n";
  return kOk;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& config, std::string listen, long budget_ms, bool no_cors, std::ostream& out,
              std::ostream& err) {
  auto path = config_path(config);
  if (!path) throw UsageError("no corpus config: pass --config or set SEMGRAPH_CONFIG");
  if (listen.empty()) {
    const char* env = std::getenv("SEMGRAPH_LISTEN");
    listen = env && *env ? env : "127.0.0.1:8080";
  }
  std::pair<std::string, int> addr;
  try {
    addr = parse_listen(listen);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  auto registry = std::make_shared<const Registry>(load_all(read_config(*path)));
  for (const auto& e : registry->entries()) {
    out << "loaded " << e.spec.id << ": " << e.corpus->size() << " graphs";
    if (!e.report.skipped.empty()) out << " (" << e.report.skipped.size() << " skipped)";
    out << "\n";
  }
  ServiceOptions opts;
  if (budget_ms > 0) opts.budget = std::chrono::milliseconds(budget_ms);
  opts.cors = !no_cors;
  Service service(registry, opts);
  HttpServer server(service);
  int port = server.bind(addr.first, addr.second);
  if (port < 0) {
    err << "cannot listen on " << listen << "\n";
    return kInputError;
  }
  out << "listening on http://" << addr.first << ":" << port << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Query and convert semantic graph corpora"};
  app.name("semgraph");
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "corpus config file (default: $SEMGRAPH_CONFIG)");

  std::string input, from, to = "interchange", output;
  auto* convert = app.add_subcommand("convert", "convert annotation files");
  convert->add_option("input", input, "input file (default: stdin)");
  convert->add_option("--from", from, "input format")->required()->check(CLI::IsMember({"penman", "sbn", "interchange"}));
  convert->add_option("--to", to, "output format")->check(CLI::IsMember({"interchange", "dot"}));
  convert->add_option("-o,--output", output, "output file (default: stdout)");

  GrepArgs grep_args;
  auto* grep = app.add_subcommand("grep", "run a request over a corpus");
  grep->add_option("--corpus", grep_args.corpus, "corpus id")->required();
  grep->add_option("--request", grep_args.request, "inline request text");
  grep->add_option("--request-file", grep_args.request_file, "file holding the request");
  grep->add_option("--cluster", grep_args.cluster, "clustering key (N.feat, e.label, whether { ... })");
  grep->add_flag("--count", grep_args.count, "print the number of occurrences");
  grep->add_flag("--json", grep_args.as_json, "machine-readable output");
  grep->add_option("--budget-ms", grep_args.budget_ms, "abort after this many milliseconds");

  std::string lint_corpus, lint_pack;
  auto* lint = app.add_subcommand("lint", "run an error-mining recipe pack");
  lint->add_option("--corpus", lint_corpus, "corpus id")->required();
  lint->add_option("--pack", lint_pack, "recipe pack (amr, pmb)")->required();

  std::string stats_corpus;
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "corpus size and edge label histogram");
  stats->add_option("--corpus", stats_corpus, "corpus id")->required();
  stats->add_flag("--json", stats_json, "machine-readable output");

  std::string listen;
  long serve_budget = 0;
  bool no_cors = false;
  auto* serve = app.add_subcommand("serve", "start the HTTP service");
  serve->add_option("--listen", listen, "host:port (default: $SEMGRAPH_LISTEN or 127.0.0.1:8080)");
  serve->add_option("--budget-ms", serve_budget, "per-request match budget (default 10000)");
  serve->add_flag("--no-cors", no_cors, "omit cross-origin headers");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsageError;
  }

  try {
    if (*convert) return cmd_convert(input, from, to, output, in, out, err);
    if (*grep) return cmd_grep(config, grep_args, out, err);
    if (*lint) return cmd_lint(config, lint_corpus, lint_pack, out, err);
    if (*stats) return cmd_stats(config, stats_corpus, stats_json, out, err);
    if (*serve) return cmd_serve(config, listen, serve_budget, no_cors, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UnknownCorpus& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsageError;
}

}  // namespace semgraph::cli
