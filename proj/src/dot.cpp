#include "semgraph/dot.hpp"

#include <sstream>

#include "semgraph/interchange.hpp"

namespace semgraph {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string render_features(const FeatureStructure& fs) {
  if (fs.size() == 1) return fs.begin()->second;
  std::string out;
  for (const auto& [k, v] : fs) {
    if (!out.empty()) out.push_back('\n');
    out += k + "=" + v;
  }
  return out;
}

std::string to_dot(const SemGraph& g, const Highlight* highlight) {
  auto ids = interchange::node_ids(g);
  std::ostringstream out;
  out << "digraph G {\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  out << "  edge [fontname=\"Helvetica\"];\n";
  for (NodeId n : g.nodes()) {
    out << "  " << quote(ids[n.index]) << " [label=" << quote(render_features(g.features(n)));
    if (g.features(n).contains("box")) out << ", shape=box3d";
    if (highlight && highlight->nodes.contains(n))
      out << ", color=" << quote(kHighlightColor) << ", fontcolor=" << quote(kHighlightColor) << ", penwidth=2";
    out << "];\n";
  }
  for (EdgeId e : g.edges()) {
    const Edge& edge = g.edge(e);
    std::string label(edge.label_text());
    for (const auto& [k, v] : edge.label)
      if (k != kLabelFeature && k != "kind") label += "\n" + k + "=" + v;
    out << "  " << quote(ids[edge.source.index]) << " -> " << quote(ids[edge.target.index])
        << " [label=" << quote(label);
    if (edge.label_text() == "in") out << ", style=dotted";
    bool lit = highlight && highlight->edges.contains(e);
    if (lit)
      out << ", color=" << quote(kHighlightColor) << ", fontcolor=" << quote(kHighlightColor) << ", penwidth=2";
    else if (edge.label.get("kind") == "constraint")
      out << ", color=\"red\", fontcolor=\"red\"";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace semgraph
