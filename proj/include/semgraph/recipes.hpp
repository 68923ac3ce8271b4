#ifndef SEMGRAPH_RECIPES_HPP
#define SEMGRAPH_RECIPES_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semgraph/feature_index.hpp"
#include "semgraph/graph.hpp"
#include "semgraph/matcher.hpp"

namespace semgraph {

/// A should-be-empty request shipped with the tool. When `base` is set the
/// report also gives the share of base occurrences the recipe fires on.
struct Recipe {
  std::string name;
  std::string description;
  std::string request;
  std::string base;
};

class UnknownPack : public std::runtime_error {
 public:
  explicit UnknownPack(const std::string& name) : std::runtime_error("unknown lint pack: " + name) {}
};

std::vector<std::string> pack_names();
/// Throws UnknownPack.
const std::vector<Recipe>& pack(std::string_view name);

struct RecipeResult {
  std::string name;
  std::size_t occurrences = 0;
  std::size_t graphs = 0;
  std::optional<std::size_t> base_occurrences;
  std::vector<std::string> samples;  // first sent_ids in corpus order
  double share() const;              // occurrences / base, 0 without base
};

std::vector<RecipeResult> run_pack(std::string_view pack_name, const Corpus& corpus,
                                   const FeatureIndex* index = nullptr, std::size_t max_samples = 5,
                                   const MatchOptions& opts = {});

}  // namespace semgraph

#endif  // SEMGRAPH_RECIPES_HPP
