#include "semgraph/interchange.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace semgraph::interchange {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json features_json(const FeatureStructure& fs) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : fs) out[k] = v;
  return out;
}

FeatureStructure features_from(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object of string features");
  FeatureStructure fs;
  for (const auto& [k, v] : obj.items()) {
    if (k.empty()) throw SchemaError(path, "empty feature name");
    if (!v.is_string()) throw SchemaError(path + "/" + k, "feature values must be strings");
    fs.set(k, v.get<std::string>());
  }
  return fs;
}

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing '") + key + "'");
  return *it;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_graph(CorpusLoad& out, const json& doc, const std::string& path, std::string fallback_id) {
  std::string sid = fallback_id;
  try {
    SemGraph g = from_json(doc, path);
    if (!g.sent_id().empty()) sid = g.sent_id();
    g.meta().set("sent_id", sid);
    out.corpus.add(std::move(g));
  } catch (const SchemaError& err) {
    out.report.skipped.push_back({sid, err.what()});
  } catch (const CorpusError& err) {
    out.report.skipped.push_back({sid, err.what()});
  }
}

}  // namespace

std::vector<std::string> node_ids(const SemGraph& g) {
  std::unordered_map<std::string, int> seen;
  for (NodeId n : g.nodes())
    if (!g.name(n).empty()) ++seen[g.name(n)];
  std::unordered_set<std::string> taken;
  for (const auto& [name, count] : seen)
    if (count == 1) taken.insert(name);

  std::vector<std::string> ids(g.node_count());
  for (NodeId n : g.nodes()) {
    const std::string& name = g.name(n);
    if (!name.empty() && seen[name] == 1) {
      ids[n.index] = name;
      continue;
    }
    std::string fallback = "n" + std::to_string(n.index);
    while (taken.contains(fallback)) fallback += "_";
    taken.insert(fallback);
    ids[n.index] = fallback;
  }
  return ids;
}

ordered_json to_json(const SemGraph& g) {
  auto ids = node_ids(g);
  ordered_json doc = ordered_json::object();
  doc["meta"] = features_json(g.meta());
  doc["nodes"] = ordered_json::array();
  for (NodeId n : g.nodes()) {
    ordered_json node = ordered_json::object();
    node["id"] = ids[n.index];
    node["features"] = features_json(g.features(n));
    doc["nodes"].push_back(std::move(node));
  }
  doc["edges"] = ordered_json::array();
  for (EdgeId e : g.edges()) {
    const Edge& edge = g.edge(e);
    ordered_json obj = ordered_json::object();
    obj["source"] = ids[edge.source.index];
    obj["target"] = ids[edge.target.index];
    obj["features"] = features_json(edge.label);
    doc["edges"].push_back(std::move(obj));
  }
  return doc;
}

SemGraph from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw SchemaError(path.empty() ? "/" : path, "graph document must be an object");
  SemGraph g;
  if (auto it = doc.find("meta"); it != doc.end()) {
    for (const auto& [k, v] : features_from(*it, path + "/meta")) g.meta().set(k, v);
  }

  const json& nodes = member(doc, "nodes", path.empty() ? "/" : path);
  if (!nodes.is_array()) throw SchemaError(path + "/nodes", "expected an array");
  std::unordered_map<std::string, NodeId> by_id;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string at = path + "/nodes/" + std::to_string(i);
    const json& node = nodes[i];
    if (!node.is_object()) throw SchemaError(at, "expected an object");
    const json& id = member(node, "id", at);
    if (!id.is_string() || id.get<std::string>().empty()) throw SchemaError(at + "/id", "expected a non-empty string");
    FeatureStructure fs;
    if (auto it = node.find("features"); it != node.end()) fs = features_from(*it, at + "/features");
    std::string name = id.get<std::string>();
    if (by_id.contains(name)) throw SchemaError(at + "/id", "duplicate node id '" + name + "'");
    by_id.emplace(name, g.add_node(std::move(fs), name));
  }

  const json& edges = member(doc, "edges", path.empty() ? "/" : path);
  if (!edges.is_array()) throw SchemaError(path + "/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string at = path + "/edges/" + std::to_string(i);
    const json& edge = edges[i];
    if (!edge.is_object()) throw SchemaError(at, "expected an object");
    auto endpoint = [&](const char* key) {
      const json& ref = member(edge, key, at);
      if (!ref.is_string()) throw SchemaError(at + "/" + key, "expected a node id string");
      auto it = by_id.find(ref.get<std::string>());
      if (it == by_id.end()) throw SchemaError(at + "/" + key, "unknown node id '" + ref.get<std::string>() + "'");
      return it->second;
    };
    NodeId src = endpoint("source");
    NodeId tgt = endpoint("target");
    FeatureStructure label = features_from(member(edge, "features", at), at + "/features");
    try {
      g.add_edge(src, tgt, std::move(label));
    } catch (const GraphError& err) {
      throw SchemaError(at, err.what());
    }
  }
  return g;
}

std::string write_graph(const SemGraph& g) { return to_json(g).dump(2) + "\n"; }

SemGraph read_graph(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw SchemaError("/", err.what());
  }
  return from_json(doc);
}

namespace {

CorpusLoad load_text(std::string_view text, std::string corpus_id, const std::string& single_id) {
  CorpusLoad out{Corpus(std::move(corpus_id)), {}};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    out.report.skipped.push_back({single_id, err.what()});
    return out;
  }
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      add_graph(out, doc[i], "/" + std::to_string(i), "#" + std::to_string(i + 1));
  } else {
    add_graph(out, doc, "", single_id);
  }
  return out;
}

}  // namespace

CorpusLoad parse_corpus(std::string_view text, std::string corpus_id) {
  return load_text(text, std::move(corpus_id), "#1");
}

CorpusLoad load_corpus(const fs::path& path, std::string corpus_id) {
  if (fs::is_regular_file(path)) return load_text(read_file(path), std::move(corpus_id), path.stem().string());
  if (!fs::is_directory(path)) throw std::runtime_error("no such interchange file or directory: " + path.string());

  CorpusLoad out{Corpus(std::move(corpus_id)), {}};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string stem = file.stem().string();
    try {
      add_graph(out, json::parse(read_file(file)), "", stem);
    } catch (const json::parse_error& err) {
      out.report.skipped.push_back({stem, err.what()});
    }
  }
  return out;
}

}  // namespace semgraph::interchange
