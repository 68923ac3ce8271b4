#ifndef SEMGRAPH_MATCHER_HPP
#define SEMGRAPH_MATCHER_HPP

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semgraph/dot.hpp"
#include "semgraph/feature_index.hpp"
#include "semgraph/graph.hpp"
#include "semgraph/query.hpp"

namespace semgraph {

/// One match of a request's base pattern. Only named pattern elements are
/// recorded; wildcards and unnamed edges are checked for existence only.
struct Occurrence {
  std::string corpus_id;
  std::string sent_id;
  std::size_t graph_index = 0;
  std::map<std::string, NodeId> nodes;
  std::map<std::string, EdgeId> edges;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

Highlight highlight_of(const Occurrence& occ);

/// Thrown when a match exceeds MatchOptions::deadline.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("match budget exceeded") {}
};

struct MatchOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// A request prepared for repeated matching. Immutable after construction
/// and safe to use from several threads.
class Matcher {
 public:
  explicit Matcher(const query::Request& req);
  ~Matcher();
  Matcher(Matcher&&) noexcept;
  Matcher& operator=(Matcher&&) noexcept;

  /// All occurrences in g, deduplicated, ordered by mapped ids.
  std::vector<Occurrence> match(const SemGraph& g, const MatchOptions& opts = {}) const;

  /// Visits every occurrence in corpus order. With an index, graphs that
  /// cannot contain the most selective equality constraint are skipped.
  void for_each(const Corpus& corpus, const FeatureIndex* index, const MatchOptions& opts,
                const std::function<void(Occurrence&&)>& visit) const;

  const query::Request& request() const;

 private:
  friend class ClusterEvaluator;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<Occurrence> match_graph(const query::Request& req, const SemGraph& g, const MatchOptions& opts = {});

std::vector<Occurrence> match_corpus(const query::Request& req, const Corpus& corpus,
                                     const FeatureIndex* index = nullptr, const MatchOptions& opts = {});

struct ClusterRow {
  std::string value;
  std::size_t count = 0;
};

struct ClusterTable {
  query::ClusterKey key;
  std::map<std::string, std::size_t> rows;
  std::size_t total() const;
  /// Rows by descending count, ties by ascending value.
  std::vector<ClusterRow> sorted() const;
};

inline constexpr const char* kUndefinedCluster = "__undefined__";

/// Assigns occurrences of one matcher to cluster rows.
class ClusterEvaluator {
 public:
  ClusterEvaluator(const Matcher& matcher, query::ClusterKey key);
  ~ClusterEvaluator();
  ClusterEvaluator(ClusterEvaluator&&) noexcept;

  /// Node feature value (or __undefined__), edge label, or yes/no for a
  /// whether key; whether uses the same extension rules as `without`.
  std::string value(const SemGraph& g, const Occurrence& occ, const MatchOptions& opts = {}) const;
  const query::ClusterKey& key() const { return key_; }

 private:
  struct Compiled;
  const Matcher* matcher_;
  query::ClusterKey key_;
  std::unique_ptr<Compiled> whether_;
};

ClusterTable cluster(const query::Request& req, const query::ClusterKey& key, const Corpus& corpus,
                     const FeatureIndex* index = nullptr, const MatchOptions& opts = {});

struct CorpusRatio {
  std::size_t matching = 0;
  std::size_t total = 0;
  double ratio = 0.0;
};

/// Share of graphs with at least one occurrence.
CorpusRatio corpus_ratio(const query::Request& req, const Corpus& corpus, const FeatureIndex* index = nullptr,
                         const MatchOptions& opts = {});

}  // namespace semgraph

#endif  // SEMGRAPH_MATCHER_HPP
