#include "semgraph/corpus_manager.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "semgraph/interchange.hpp"
#include "semgraph/penman.hpp"
#include "semgraph/sbn.hpp"

namespace fs = std::filesystem;

namespace semgraph {

std::string_view format_name(CorpusFormat f) {
  switch (f) {
    case CorpusFormat::Penman: return "penman";
    case CorpusFormat::Sbn: return "sbn";
    case CorpusFormat::Interchange: return "interchange";
  }
  return "?";
}

std::optional<CorpusFormat> parse_format(std::string_view name) {
  if (name == "penman" || name == "amr") return CorpusFormat::Penman;
  if (name == "sbn") return CorpusFormat::Sbn;
  if (name == "interchange" || name == "json") return CorpusFormat::Interchange;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

// `"..."` with \" \\ \n \t escapes, or a bare word; trailing `# comment` allowed.
std::string parse_value(std::string_view raw, int line) {
  raw = trim(raw);
  if (raw.empty()) fail(line, "missing value");
  if (raw.front() != '"') {
    auto hash = raw.find('#');
    std::string_view word = trim(raw.substr(0, hash));
    if (word.empty() || word.find_first_of(" \t\"") != std::string_view::npos) fail(line, "malformed value");
    return std::string(word);
  }
  std::string out;
  std::size_t i = 1;
  for (; i < raw.size() && raw[i] != '"'; ++i) {
    if (raw[i] != '\\') {
      out += raw[i];
      continue;
    }
    if (++i == raw.size()) break;
    switch (raw[i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      default: fail(line, std::string("unknown escape \\") + raw[i]);
    }
  }
  if (i >= raw.size()) fail(line, "unterminated string");
  std::string_view rest = trim(raw.substr(i + 1));
  if (!rest.empty() && rest.front() != '#') fail(line, "unexpected text after value");
  return out;
}

void finish(CorpusConfig& cfg, std::map<std::string, std::string>& table, int table_line,
            const fs::path& base_dir) {
  auto need = [&](const char* key) {
    auto it = table.find(key);
    if (it == table.end() || it->second.empty()) fail(table_line, std::string("corpus table lacks `") + key + "`");
    return it->second;
  };
  CorpusSpec spec;
  spec.id = need("id");
  std::string fmt = need("format");
  auto f = parse_format(fmt);
  if (!f) fail(table_line, "unknown format `" + fmt + "` (expected penman, sbn or interchange)");
  spec.format = *f;
  fs::path p = need("path");
  spec.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  if (auto it = table.find("language"); it != table.end()) spec.language = it->second;
  for (const auto& existing : cfg.corpora)
    if (existing.id == spec.id) fail(table_line, "duplicate corpus id `" + spec.id + "`");
  cfg.corpora.push_back(std::move(spec));
  table.clear();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CorpusConfig parse_config(std::string_view text, const fs::path& base_dir) {
  static const std::set<std::string, std::less<>> kKeys = {"id", "format", "path", "language"};
  CorpusConfig cfg;
  std::map<std::string, std::string> table;
  bool in_table = false;
  int table_line = 0;
  int line_no = 0;
  std::istringstream lines{std::string(text)};
  for (std::string raw; std::getline(lines, raw);) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      std::string_view head = line.substr(0, line.find('#'));
      head = trim(head);
      if (head != "[[corpus]]") fail(line_no, "expected [[corpus]], got " + std::string(head));
      if (in_table) finish(cfg, table, table_line, base_dir);
      in_table = true;
      table_line = line_no;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected key = value");
    std::string key(trim(line.substr(0, eq)));
    if (!in_table) fail(line_no, "key `" + key + "` outside a [[corpus]] table");
    if (!kKeys.contains(key)) fail(line_no, "unknown key `" + key + "`");
    if (table.contains(key)) fail(line_no, "repeated key `" + key + "`");
    table[key] = parse_value(line.substr(eq + 1), line_no);
  }
  if (in_table) finish(cfg, table, table_line, base_dir);
  return cfg;
}

CorpusConfig read_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path());
}

std::optional<fs::path> config_path(std::string_view flag_value) {
  if (!flag_value.empty()) return fs::path(flag_value);
  if (const char* env = std::getenv("SEMGRAPH_CONFIG"); env && *env) return fs::path(env);
  return std::nullopt;
}

CorpusStats compute_stats(const Corpus& corpus) {
  CorpusStats s;
  s.graphs = corpus.size();
  for (const SemGraph& g : corpus) {
    s.nodes += g.node_count();
    s.edges += g.edge_count();
    if (g.is_cyclic()) ++s.cyclic;
    for (EdgeId e : g.edges()) ++s.labels[std::string(g.edge(e).label_text())];
  }
  return s;
}

Registry::Registry(std::vector<CorpusEntry> entries) : entries_(std::move(entries)) {}

const CorpusEntry* Registry::find(std::string_view id) const {
  for (const auto& e : entries_)
    if (e.spec.id == id) return &e;
  return nullptr;
}

const CorpusEntry& Registry::at(std::string_view id) const {
  if (const CorpusEntry* e = find(id)) return *e;
  throw UnknownCorpus(std::string(id));
}

namespace {

// A release directory holds several files; they are read in name order
// and merged into one corpus.
penman::CorpusLoad load_penman(const fs::path& path, const std::string& id) {
  if (fs::is_regular_file(path)) return penman::parse_corpus(read_file(path), id);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  penman::CorpusLoad out{Corpus(id), {}};
  for (const auto& file : files) {
    auto part = penman::parse_corpus(read_file(file), id);
    for (auto& issue : part.report.skipped) out.report.skipped.push_back(std::move(issue));
    for (auto& issue : part.report.warnings) out.report.warnings.push_back(std::move(issue));
    for (const SemGraph& g : part.corpus) {
      try {
        out.corpus.add(g);
      } catch (const CorpusError& err) {
        out.report.skipped.push_back({g.sent_id(), err.what()});
      }
    }
  }
  return out;
}

}  // namespace

CorpusEntry load_corpus(const CorpusSpec& spec) {
  if (!fs::exists(spec.path))
    throw ConfigError("corpus `" + spec.id + "`: path does not exist: " + spec.path.string());
  CorpusEntry entry;
  entry.spec = spec;
  Corpus corpus;
  try {
    switch (spec.format) {
      case CorpusFormat::Penman: {
        auto load = load_penman(spec.path, spec.id);
        corpus = std::move(load.corpus);
        entry.report = std::move(load.report);
        break;
      }
      case CorpusFormat::Sbn: {
        auto load = sbn::load_corpus(spec.path, spec.id, spec.language);
        corpus = std::move(load.corpus);
        entry.report = std::move(load.report);
        break;
      }
      case CorpusFormat::Interchange: {
        auto load = interchange::load_corpus(spec.path, spec.id);
        corpus = std::move(load.corpus);
        entry.report = std::move(load.report);
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& err) {
    // A whole-file failure (unreadable file, malformed JSON array) leaves the
    // corpus empty but keeps the rest of the registry usable.
    entry.report.skipped.push_back({"", err.what()});
  }
  auto shared = std::make_shared<const Corpus>(std::move(corpus));
  entry.index = std::make_shared<const FeatureIndex>(*shared);
  entry.corpus = std::move(shared);
  return entry;
}

Registry load_all(const CorpusConfig& config) {
  std::set<std::string, std::less<>> ids;
  for (const auto& spec : config.corpora) {
    if (!ids.insert(spec.id).second) throw ConfigError("duplicate corpus id `" + spec.id + "`");
    if (!fs::exists(spec.path))
      throw ConfigError("corpus `" + spec.id + "`: path does not exist: " + spec.path.string());
  }
  std::vector<CorpusEntry> entries;
  entries.reserve(config.corpora.size());
  for (const auto& spec : config.corpora) entries.push_back(load_corpus(spec));
  return Registry(std::move(entries));
}

}  // namespace semgraph
