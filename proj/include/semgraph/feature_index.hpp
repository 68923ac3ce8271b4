#ifndef SEMGRAPH_FEATURE_INDEX_HPP
#define SEMGRAPH_FEATURE_INDEX_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semgraph/graph.hpp"

namespace semgraph {

struct Posting {
  std::size_t graph = 0;  // position in the corpus
  NodeId node;
  friend auto operator<=>(const Posting&, const Posting&) = default;
};

/// Inverted index over exact node (feature, value) pairs of one corpus.
/// Posting lists are sorted by (graph, node).
class FeatureIndex {
 public:
  FeatureIndex() = default;
  explicit FeatureIndex(const Corpus& corpus);

  std::span<const Posting> postings(std::string_view feature, std::string_view value) const;
  std::size_t pair_count() const { return pairs_; }

  friend bool operator==(const FeatureIndex&, const FeatureIndex&) = default;

 private:
  std::map<std::string, std::map<std::string, std::vector<Posting>, std::less<>>, std::less<>> postings_;
  std::size_t pairs_ = 0;
};

}  // namespace semgraph

#endif  // SEMGRAPH_FEATURE_INDEX_HPP
