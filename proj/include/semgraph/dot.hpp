#ifndef SEMGRAPH_DOT_HPP
#define SEMGRAPH_DOT_HPP

#include <set>
#include <string>

#include "semgraph/graph.hpp"

namespace semgraph {

/// Graph elements to draw in the highlight colour.
struct Highlight {
  std::set<NodeId> nodes;
  std::set<EdgeId> edges;
};

inline constexpr const char* kHighlightColor = "#1f77b4";

/// Graphviz digraph for g. Membership edges (`in`) are dotted, edges with
/// kind=constraint are red, highlighted elements use kHighlightColor.
/// Statements are emitted in id order so output is deterministic.
std::string to_dot(const SemGraph& g, const Highlight* highlight = nullptr);

/// Node label text: a lone feature shows its value, otherwise `name=value` lines.
std::string render_features(const FeatureStructure& fs);

}  // namespace semgraph

#endif  // SEMGRAPH_DOT_HPP
