#ifndef SEMGRAPH_QUERY_HPP
#define SEMGRAPH_QUERY_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semgraph/errors.hpp"

namespace semgraph::query {

// Node clauses: `N [f]`, `N [f = v]`, `N [f <> v]`, `N [f = re"..."]`.
struct FeaturePresent {
  std::string name;
  friend bool operator==(const FeaturePresent&, const FeaturePresent&) = default;
};
struct FeatureEq {
  std::string name;
  std::string value;
  friend bool operator==(const FeatureEq&, const FeatureEq&) = default;
};
/// Holds when the feature is absent or carries a different value.
struct FeatureNeq {
  std::string name;
  std::string value;
  friend bool operator==(const FeatureNeq&, const FeatureNeq&) = default;
};
/// Anchored: the pattern must match the whole value.
struct FeatureRegex {
  std::string name;
  std::string pattern;
  friend bool operator==(const FeatureRegex&, const FeatureRegex&) = default;
};

using Clause = std::variant<FeaturePresent, FeatureEq, FeatureNeq, FeatureRegex>;

struct NodeConstraint {
  std::string ident;
  std::vector<Clause> clauses;
  friend bool operator==(const NodeConstraint&, const NodeConstraint&) = default;
};

/// Named node or `*` (an anonymous node of its own).
struct NodeRef {
  std::string ident;  // empty for `*`
  bool wildcard() const { return ident.empty(); }
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct EdgeConstraint {
  std::optional<std::string> ident;
  NodeRef source;
  NodeRef target;
  std::vector<std::string> labels;  // empty: any label
  friend bool operator==(const EdgeConstraint&, const EdgeConstraint&) = default;
};

/// `N.f = M.g` or `N.f <> M.g`; both features must be present.
struct FeatureRelation {
  std::string left_ident;
  std::string left_feature;
  bool equal = true;
  std::string right_ident;
  std::string right_feature;
  friend bool operator==(const FeatureRelation&, const FeatureRelation&) = default;
};

struct PatternBlock {
  std::vector<NodeConstraint> nodes;
  std::vector<EdgeConstraint> edges;
  std::vector<FeatureRelation> relations;

  bool empty() const { return nodes.empty() && edges.empty() && relations.empty(); }
  /// Named node identifiers in first-appearance order (declarations, then edge endpoints).
  std::vector<std::string> node_idents() const;
  std::vector<std::string> edge_idents() const;
  friend bool operator==(const PatternBlock&, const PatternBlock&) = default;
};

enum class GlobalConstraint { IsCyclic, IsAcyclic };

struct Request {
  PatternBlock base;
  std::vector<PatternBlock> withouts;
  std::vector<GlobalConstraint> globals;
  friend bool operator==(const Request&, const Request&) = default;
};

struct ClusterKey {
  enum class Kind { NodeFeature, EdgeLabel, Whether };
  Kind kind = Kind::NodeFeature;
  std::string ident;    // NodeFeature, EdgeLabel
  std::string feature;  // NodeFeature
  PatternBlock whether;
  friend bool operator==(const ClusterKey&, const ClusterKey&) = default;
};

class QueryError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, DuplicateIdentifier, EmptyRequest, UnknownForm, InvalidRegex };

  QueryError(Kind kind, SourcePosition pos, std::string message, std::vector<std::string> expected = {});

  Kind kind() const { return kind_; }
  SourcePosition position() const { return pos_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }
  std::string kind_name() const;

  /// Message followed by the offending source line and a caret under the column.
  std::string annotate(std::string_view source) const;

 private:
  Kind kind_;
  SourcePosition pos_;
  std::string message_;
  std::vector<std::string> expected_;
};

Request parse_request(std::string_view text);
ClusterKey parse_cluster_key(std::string_view text, const Request& req);

/// Canonical text; parse_request(print(r)) == r.
std::string print(const Request& req);
std::string print(const PatternBlock& block);
std::string print(const ClusterKey& key);

}  // namespace semgraph::query

#endif  // SEMGRAPH_QUERY_HPP
