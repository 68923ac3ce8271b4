#include "semgraph/feature_index.hpp"

namespace semgraph {

FeatureIndex::FeatureIndex(const Corpus& corpus) {
  for (std::size_t gi = 0; gi < corpus.size(); ++gi) {
    const SemGraph& g = corpus[gi];
    for (NodeId n : g.nodes())
      for (const auto& [k, v] : g.features(n)) {
        auto& list = postings_[k][v];
        if (list.empty()) ++pairs_;
        list.push_back(Posting{gi, n});
      }
  }
}

std::span<const Posting> FeatureIndex::postings(std::string_view feature, std::string_view value) const {
  auto by_feature = postings_.find(feature);
  if (by_feature == postings_.end()) return {};
  auto it = by_feature->second.find(value);
  if (it == by_feature->second.end()) return {};
  return it->second;
}

}  // namespace semgraph
