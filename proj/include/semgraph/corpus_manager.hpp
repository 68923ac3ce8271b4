#ifndef SEMGRAPH_CORPUS_MANAGER_HPP
#define SEMGRAPH_CORPUS_MANAGER_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semgraph/errors.hpp"
#include "semgraph/feature_index.hpp"
#include "semgraph/graph.hpp"

namespace semgraph {

enum class CorpusFormat { Penman, Sbn, Interchange };

std::string_view format_name(CorpusFormat f);
std::optional<CorpusFormat> parse_format(std::string_view name);

struct CorpusSpec {
  std::string id;
  CorpusFormat format = CorpusFormat::Penman;
  std::filesystem::path path;
  std::string language;  // optional; empty when unset
  friend bool operator==(const CorpusSpec&, const CorpusSpec&) = default;
};

struct CorpusConfig {
  std::vector<CorpusSpec> corpora;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the corpus list:
///
///   # comment
///   [[corpus]]
///   id = "lpp"
///   format = "penman"
///   path = "corpora/amr-lpp.txt"
///   language = "en"        # optional
///
/// Relative paths resolve against `base_dir`. Throws ConfigError on syntax
/// errors, unknown keys or formats, missing fields and duplicate ids.
CorpusConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
CorpusConfig read_config(const std::filesystem::path& path);

/// Config path from an explicit flag value, else $SEMGRAPH_CONFIG; nullopt if neither.
std::optional<std::filesystem::path> config_path(std::string_view flag_value);

/// One loaded corpus with its index.
struct CorpusEntry {
  CorpusSpec spec;
  std::shared_ptr<const Corpus> corpus;
  std::shared_ptr<const FeatureIndex> index;
  LoadReport report;
};

class UnknownCorpus : public std::runtime_error {
 public:
  explicit UnknownCorpus(const std::string& id) : std::runtime_error("unknown corpus: " + id), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

struct CorpusStats {
  std::size_t graphs = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t cyclic = 0;
  std::map<std::string, std::size_t> labels;  // edge label -> count
};

CorpusStats compute_stats(const Corpus& corpus);

/// Immutable set of loaded corpora in config order.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<CorpusEntry> entries);

  const std::vector<CorpusEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const CorpusEntry* find(std::string_view id) const;
  /// Throws UnknownCorpus.
  const CorpusEntry& at(std::string_view id) const;
  CorpusStats stats(std::string_view id) const { return compute_stats(*at(id).corpus); }

 private:
  std::vector<CorpusEntry> entries_;
};

/// Loads a single corpus with the reader for its format.
CorpusEntry load_corpus(const CorpusSpec& spec);

/// Loads every configured corpus. Missing paths raise ConfigError naming the
/// path; per-sentence failures land in each entry's report.
Registry load_all(const CorpusConfig& config);

}  // namespace semgraph

#endif  // SEMGRAPH_CORPUS_MANAGER_HPP
