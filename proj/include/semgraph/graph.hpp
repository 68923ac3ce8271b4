#ifndef SEMGRAPH_GRAPH_HPP
#define SEMGRAPH_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semgraph {

/// Flat string-to-string feature map decorating nodes, edges and graph metadata.
/// Names and values compare byte-exactly.
class FeatureStructure {
 public:
  using Map = std::map<std::string, std::string, std::less<>>;

  FeatureStructure() = default;
  FeatureStructure(std::initializer_list<Map::value_type> init) : entries_(init) {}

  /// Inserts or overwrites. Throws std::invalid_argument on an empty name.
  void set(std::string name, std::string value);
  bool erase(std::string_view name);

  std::optional<std::string_view> get(std::string_view name) const;
  bool contains(std::string_view name) const { return entries_.find(name) != entries_.end(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  friend bool operator==(const FeatureStructure&, const FeatureStructure&) = default;
  friend auto operator<=>(const FeatureStructure& a, const FeatureStructure& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  Map entries_;
};

/// Name of the edge feature every edge must carry.
inline constexpr std::string_view kLabelFeature = "label";

/// Shorthand for a simple edge label structure {label: value}.
FeatureStructure edge_label(std::string value);

struct NodeId {
  std::uint32_t index = 0;
  friend auto operator<=>(NodeId, NodeId) = default;
};

struct EdgeId {
  std::uint32_t index = 0;
  friend auto operator<=>(EdgeId, EdgeId) = default;
};

struct Edge {
  NodeId source;
  NodeId target;
  FeatureStructure label;

  /// Value of the `label` feature.
  std::string_view label_text() const;
  /// True when the label structure holds nothing but `label`.
  bool is_simple() const { return label.size() == 1; }
};

class GraphError : public std::runtime_error {
 public:
  enum class Kind { Sealed, UnknownNode, UnknownEndpoint, DuplicateEdge, MissingLabelFeature };
  GraphError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Adjacent {
  EdgeId edge;
  NodeId node;
  friend bool operator==(const Adjacent&, const Adjacent&) = default;
};

/// One sentence's annotation graph. Built through add_node/add_edge, then
/// sealed; a sealed graph is immutable and safe to share across threads.
class SemGraph {
 public:
  SemGraph() = default;

  NodeId add_node(FeatureStructure features, std::string name = {});
  EdgeId add_edge(NodeId source, NodeId target, FeatureStructure label);
  EdgeId add_edge(NodeId source, NodeId target, std::string label) {
    return add_edge(source, target, edge_label(std::move(label)));
  }
  void seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

  /// Metadata (sent_id, text, other corpus header keys). Editable until sealed.
  FeatureStructure& meta();
  const FeatureStructure& meta() const { return meta_; }
  std::string sent_id() const;
  std::string text() const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(NodeId n) const { return n.index < nodes_.size(); }
  bool contains(EdgeId e) const { return e.index < edges_.size(); }

  const FeatureStructure& features(NodeId n) const;
  /// Source name (Penman variable, SBN box name, interchange id); may be empty.
  const std::string& name(NodeId n) const;
  const Edge& edge(EdgeId e) const;

  /// Outgoing edges of n ordered by EdgeId.
  std::span<const Adjacent> successors(NodeId n) const;
  /// Incoming edges of n ordered by EdgeId.
  std::span<const Adjacent> predecessors(NodeId n) const;

  /// Edge with exactly this label structure between source and target, if any.
  std::optional<EdgeId> find_edge(NodeId source, NodeId target, const FeatureStructure& label) const;

  std::vector<NodeId> nodes() const;
  std::vector<EdgeId> edges() const;

  /// True iff the directed graph over all edges has a directed cycle.
  bool is_cyclic() const;

 private:
  void check_open() const;
  void check_node(NodeId n) const;

  struct NodeRecord {
    FeatureStructure features;
    std::string name;
    std::vector<Adjacent> out;
    std::vector<Adjacent> in;
  };

  std::vector<NodeRecord> nodes_;
  std::vector<Edge> edges_;
  std::set<std::tuple<std::uint32_t, std::uint32_t, FeatureStructure>> edge_keys_;
  FeatureStructure meta_;
  bool sealed_ = false;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered collection of sealed graphs with unique sentence identifiers.
class Corpus {
 public:
  explicit Corpus(std::string id = {}) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  /// Seals and appends. Throws CorpusError when the sent_id is empty or already present.
  void add(SemGraph graph);

  std::size_t size() const { return graphs_.size(); }
  bool empty() const { return graphs_.empty(); }
  const SemGraph& operator[](std::size_t i) const { return graphs_[i]; }
  const std::vector<SemGraph>& graphs() const { return graphs_; }
  std::vector<SemGraph>::const_iterator begin() const { return graphs_.begin(); }
  std::vector<SemGraph>::const_iterator end() const { return graphs_.end(); }

  std::optional<std::size_t> find(std::string_view sent_id) const;

 private:
  std::string id_;
  std::vector<SemGraph> graphs_;
  std::unordered_map<std::string, std::size_t> by_sent_id_;
};

}  // namespace semgraph

#endif  // SEMGRAPH_GRAPH_HPP
