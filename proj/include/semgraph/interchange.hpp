#ifndef SEMGRAPH_INTERCHANGE_HPP
#define SEMGRAPH_INTERCHANGE_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "semgraph/errors.hpp"
#include "semgraph/graph.hpp"

namespace semgraph::interchange {

/// Raised for documents that do not follow the interchange schema. `path`
/// is a JSON pointer to the offending element.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// String ids used for nodes in interchange and DOT output: the node's
/// source name when it is non-empty and unique, `n<index>` otherwise.
std::vector<std::string> node_ids(const SemGraph& g);

nlohmann::ordered_json to_json(const SemGraph& g);
/// Builds an unsealed graph; node source names are the document ids.
SemGraph from_json(const nlohmann::json& doc, const std::string& path = "");

/// Document shape:
///   {"meta": {...}, "nodes": [{"id", "features"}], "edges": [{"source", "target", "features"}]}
std::string write_graph(const SemGraph& g);
SemGraph read_graph(std::string_view text);

struct CorpusLoad {
  Corpus corpus;
  LoadReport report;
};

/// A JSON array of graph documents, a single graph document, or a directory
/// of `*.json` files (sorted by name). Missing sent_ids fall back to the file
/// stem or the 1-based position.
CorpusLoad load_corpus(const std::filesystem::path& path, std::string corpus_id = {});
CorpusLoad parse_corpus(std::string_view text, std::string corpus_id = {});

}  // namespace semgraph::interchange

#endif  // SEMGRAPH_INTERCHANGE_HPP
