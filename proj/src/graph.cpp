#include "semgraph/graph.hpp"

#include <algorithm>

namespace semgraph {

void FeatureStructure::set(std::string name, std::string value) {
  if (name.empty()) throw std::invalid_argument("feature name must not be empty");
  entries_.insert_or_assign(std::move(name), std::move(value));
}

bool FeatureStructure::erase(std::string_view name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) return false;
  entries_.erase(it);
  return true;
}

std::optional<std::string_view> FeatureStructure::get(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return std::string_view(it->second);
}

FeatureStructure edge_label(std::string value) {
  FeatureStructure fs;
  fs.set(std::string(kLabelFeature), std::move(value));
  return fs;
}

std::string_view Edge::label_text() const { return label.get(kLabelFeature).value_or(""); }

NodeId SemGraph::add_node(FeatureStructure features, std::string name) {
  check_open();
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(NodeRecord{std::move(features), std::move(name), {}, {}});
  return id;
}

EdgeId SemGraph::add_edge(NodeId source, NodeId target, FeatureStructure label) {
  check_open();
  if (!contains(source) || !contains(target))
    throw GraphError(GraphError::Kind::UnknownEndpoint, "edge endpoint is not a node of this graph");
  if (!label.contains(kLabelFeature))
    throw GraphError(GraphError::Kind::MissingLabelFeature, "edge label structure has no 'label' feature");
  auto key = std::make_tuple(source.index, target.index, label);
  if (edge_keys_.contains(key))
    throw GraphError(GraphError::Kind::DuplicateEdge,
                     "duplicate edge '" + std::string(label.get(kLabelFeature).value_or("")) + "'");
  EdgeId id{static_cast<std::uint32_t>(edges_.size())};
  edges_.push_back(Edge{source, target, std::move(label)});
  edge_keys_.insert(std::move(key));
  nodes_[source.index].out.push_back({id, target});
  nodes_[target.index].in.push_back({id, source});
  return id;
}

FeatureStructure& SemGraph::meta() {
  check_open();
  return meta_;
}

std::string SemGraph::sent_id() const { return std::string(meta_.get("sent_id").value_or("")); }
std::string SemGraph::text() const { return std::string(meta_.get("text").value_or("")); }

const FeatureStructure& SemGraph::features(NodeId n) const {
  check_node(n);
  return nodes_[n.index].features;
}

const std::string& SemGraph::name(NodeId n) const {
  check_node(n);
  return nodes_[n.index].name;
}

const Edge& SemGraph::edge(EdgeId e) const {
  if (!contains(e)) throw GraphError(GraphError::Kind::UnknownNode, "unknown edge id");
  return edges_[e.index];
}

std::span<const Adjacent> SemGraph::successors(NodeId n) const {
  check_node(n);
  return nodes_[n.index].out;
}

std::span<const Adjacent> SemGraph::predecessors(NodeId n) const {
  check_node(n);
  return nodes_[n.index].in;
}

std::optional<EdgeId> SemGraph::find_edge(NodeId source, NodeId target,
                                          const FeatureStructure& label) const {
  for (const auto& adj : successors(source))
    if (adj.node == target && edges_[adj.edge.index].label == label) return adj.edge;
  return std::nullopt;
}

std::vector<NodeId> SemGraph::nodes() const {
  std::vector<NodeId> out(nodes_.size());
  for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = NodeId{i};
  return out;
}

std::vector<EdgeId> SemGraph::edges() const {
  std::vector<EdgeId> out(edges_.size());
  for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = EdgeId{i};
  return out;
}

bool SemGraph::is_cyclic() const {
  // Iterative three-colour DFS.
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> colour(nodes_.size(), White);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < nodes_.size(); ++root) {
    if (colour[root] != White) continue;
    colour[root] = Grey;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = nodes_[node].out;
      if (next == out.size()) {
        colour[node] = Black;
        stack.pop_back();
        continue;
      }
      std::uint32_t succ = out[next++].node.index;
      if (colour[succ] == Grey) return true;
      if (colour[succ] == White) {
        colour[succ] = Grey;
        stack.emplace_back(succ, 0);
      }
    }
  }
  return false;
}

void SemGraph::check_open() const {
  if (sealed_) throw GraphError(GraphError::Kind::Sealed, "graph is sealed");
}

void SemGraph::check_node(NodeId n) const {
  if (!contains(n)) throw GraphError(GraphError::Kind::UnknownNode, "unknown node id");
}

void Corpus::add(SemGraph graph) {
  std::string sid = graph.sent_id();
  if (sid.empty()) throw CorpusError("graph has no sent_id");
  if (by_sent_id_.contains(sid)) throw CorpusError("duplicate sent_id '" + sid + "'");
  graph.seal();
  by_sent_id_.emplace(std::move(sid), graphs_.size());
  graphs_.push_back(std::move(graph));
}

std::optional<std::size_t> Corpus::find(std::string_view sent_id) const {
  auto it = by_sent_id_.find(std::string(sent_id));
  if (it == by_sent_id_.end()) return std::nullopt;
  return it->second;
}

}  // namespace semgraph
