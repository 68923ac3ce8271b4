#include "semgraph/recipes.hpp"

#include <map>

namespace semgraph {

namespace {

const std::map<std::string, std::vector<Recipe>, std::less<>>& packs() {
  static const std::map<std::string, std::vector<Recipe>, std::less<>> kPacks = {
      {"amr",
       {{"name-without-wiki", "named entity lacking a :wiki link",
         "pattern { M -[name]-> N }\nwithout { M -[wiki]-> * }", "pattern { M -[name]-> N }"}}},
      {"pmb",
       {{"agent-equals-patient", "one participant is both Agent and Patient of an event",
         "pattern { P -[Agent]-> E; P -[Patient]-> E }", ""},
        {"double-negation", "negation box nested directly in a negation box",
         "pattern { B1 -[NEGATION]-> B2; B2 -[NEGATION]-> B3 }", ""}}},
  };
  return kPacks;
}

std::size_t count(const Matcher& m, const Corpus& corpus, const FeatureIndex* index, const MatchOptions& opts) {
  std::size_t n = 0;
  m.for_each(corpus, index, opts, [&](Occurrence&&) { ++n; });
  return n;
}

}  // namespace

std::vector<std::string> pack_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : packs()) out.push_back(name);
  return out;
}

const std::vector<Recipe>& pack(std::string_view name) {
  auto it = packs().find(name);
  if (it == packs().end()) throw UnknownPack(std::string(name));
  return it->second;
}

double RecipeResult::share() const {
  if (!base_occurrences || *base_occurrences == 0) return 0.0;
  return static_cast<double>(occurrences) / static_cast<double>(*base_occurrences);
}

std::vector<RecipeResult> run_pack(std::string_view pack_name, const Corpus& corpus, const FeatureIndex* index,
                                   std::size_t max_samples, const MatchOptions& opts) {
  std::vector<RecipeResult> out;
  for (const Recipe& recipe : pack(pack_name)) {
    RecipeResult r;
    r.name = recipe.name;
    Matcher m(query::parse_request(recipe.request));
    std::size_t last_graph = static_cast<std::size_t>(-1);
    m.for_each(corpus, index, opts, [&](Occurrence&& occ) {
      ++r.occurrences;
      if (occ.graph_index == last_graph) return;
      last_graph = occ.graph_index;
      ++r.graphs;
      if (r.samples.size() < max_samples) r.samples.push_back(occ.sent_id);
    });
    if (!recipe.base.empty()) r.base_occurrences = count(Matcher(query::parse_request(recipe.base)), corpus, index, opts);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace semgraph
