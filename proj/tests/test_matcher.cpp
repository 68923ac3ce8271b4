#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <thread>

#include "fixtures.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "semgraph/matcher.hpp"
#include "semgraph/penman.hpp"
#include "semgraph/sbn.hpp"

using namespace semgraph;

namespace {

std::vector<oracle::NamedMatch> named(const std::vector<Occurrence>& occs) {
  std::vector<oracle::NamedMatch> out;
  for (const auto& o : occs) out.emplace_back(o.nodes, o.edges);
  return out;
}

Corpus random_corpus(gen::Rng& rng, int size, const gen::GraphShape& shape = {}) {
  Corpus c("rand");
  for (int i = 0; i < size; ++i) {
    SemGraph g = gen::graph(rng, shape);
    g.meta().set("sent_id", "g" + std::to_string(i));
    c.add(std::move(g));
  }
  return c;
}

std::size_t count(const Matcher& m, const Corpus& c, const FeatureIndex* index) {
  std::size_t n = 0;
  m.for_each(c, index, {}, [&](Occurrence&&) { ++n; });
  return n;
}

}  // namespace

TEST_CASE("engine agrees with exhaustive enumeration on 1000 seeded instances") {
  gen::Rng rng(20220620);
  int nonempty = 0;
  for (int i = 0; i < 1000; ++i) {
    SemGraph g = gen::graph(rng);
    g.seal();
    std::string text = gen::request(rng);
    query::Request req = query::parse_request(text);
    auto expected = oracle::match(req, g);
    auto got = named(match_graph(req, g));
    CHECK_MESSAGE(got == expected, "case " << i << "\n" << text);
    nonempty += !expected.empty();
  }
  // the generator must exercise matches, not just empty results
  CHECK(nonempty > 250);
}

TEST_CASE("the fox sentence") {
  SemGraph g = penman::parse(fixtures::kFoxPenman);
  g.seal();
  auto run = [&](std::string_view text) { return match_graph(query::parse_request(text), g); };
  CHECK(run(R"(pattern { N [concept = "fox"] })").size() == 1);
  CHECK(run(R"(pattern { M [concept]; N [concept]; e: M -> N })").size() == 7);  // the value edge ends in a constant
  CHECK(run(R"(pattern { K -[ARG0]-> I; F -[poss]-> I })").size() == 1);
  CHECK(run(R"(pattern { K -[ARG0]-> I } without { F -[poss]-> I })").empty());
  CHECK(run(R"(pattern { N [concept = re"know-.*"] })").size() == 1);
  CHECK(run(R"(pattern { N [concept = re"know"] })").empty());  // anchored
  CHECK(run(R"(pattern { N -> * })").size() == 4);  // r, f, k and o have successors
}

TEST_CASE("occurrences are injective and keyed by named elements") {
  SemGraph g;
  NodeId a = g.add_node({{"concept", "a"}});
  NodeId b = g.add_node({{"concept", "a"}});
  g.add_edge(a, b, "x");
  g.add_edge(a, b, "y");
  g.seal();
  // X and Y must land on different nodes
  CHECK(match_graph(query::parse_request("pattern { X [concept = a]; Y [concept = a] }"), g).size() == 2);
  // two anonymous edges between the same endpoints give one occurrence
  CHECK(match_graph(query::parse_request("pattern { X -[x|y]-> Y }"), g).size() == 1);
  // named edges are distinguished
  CHECK(match_graph(query::parse_request("pattern { e: X -[x|y]-> Y }"), g).size() == 2);
  // two pattern edges cannot share one graph edge
  CHECK(match_graph(query::parse_request("pattern { X -[x]-> Y; X -[x]-> Y }"), g).empty());
  CHECK(match_graph(query::parse_request("pattern { X -> Y; X -> Y }"), g).size() == 1);
  // a wildcard never reuses a named node
  CHECK(match_graph(query::parse_request("pattern { X -> * ; X [concept = a]; Y [concept = a] }"), g).empty());
}

TEST_CASE("results are sorted and deduplicated") {
  gen::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    SemGraph g = gen::graph(rng);
    g.seal();
    auto occs = match_graph(query::parse_request(gen::request(rng)), g);
    auto keys = named(occs);
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  }
}

TEST_CASE("without blocks only remove occurrences") {
  gen::Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    SemGraph g = gen::graph(rng);
    g.seal();
    query::Request base = query::parse_request(gen::request(rng, false));
    query::Request more = query::parse_request(query::print(base) + "without { " +
                                               base.base.node_idents()[0] + " -[" + gen::pick(rng, gen::kLabels) +
                                               "]-> * }");
    auto all = named(match_graph(base, g));
    auto fewer = named(match_graph(more, g));
    CHECK(std::includes(all.begin(), all.end(), fewer.begin(), fewer.end()));
  }
}

TEST_CASE("whether clustering partitions occurrences") {
  gen::Rng rng(15);
  for (int round = 0; round < 40; ++round) {
    Corpus c = random_corpus(rng, 10);
    query::Request req = query::parse_request(gen::request(rng, false));
    std::string ident = req.base.node_idents()[0];
    query::ClusterKey key = query::parse_cluster_key("whether { " + ident + " -[x]-> W }", req);
    ClusterTable t = cluster(req, key, c);
    std::size_t total = match_corpus(req, c).size();
    CHECK(t.total() == total);
    CHECK(t.rows.size() == 2);

    std::size_t yes = 0;
    for (const SemGraph& g : c)
      for (const auto& m : oracle::match(req, g)) yes += oracle::extends(g, key.whether, m);
    CHECK(t.rows["yes"] == yes);
    CHECK(t.rows["no"] == total - yes);
  }
}

TEST_CASE("feature and edge label clustering") {
  SemGraph g = penman::parse(fixtures::kFoxPenman);
  g.meta().set("sent_id", "fox");
  Corpus c;
  c.add(std::move(g));
  query::Request req = query::parse_request("pattern { M [concept]; N [concept]; e: M -> N }");
  ClusterTable by_label = cluster(req, query::parse_cluster_key("e.label", req), c);
  auto rows = by_label.sorted();
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].value == "ARG1");
  CHECK(rows[0].count == 2);
  CHECK(rows[1].value == "ARG0");  // ties by value
  CHECK(rows[5].value == "time");

  query::Request any = query::parse_request("pattern { N [] }");
  ClusterTable by_value = cluster(any, query::parse_cluster_key("N.value", any), c);
  CHECK(by_value.rows[kUndefinedCluster] == 6);
  CHECK(by_value.rows["1"] == 1);
}

TEST_CASE("global constraints") {
  SemGraph cyc = penman::parse("(b / boy :ARG0-of (w / want-01 :ARG1 b))");
  SemGraph acyc = penman::parse(fixtures::kFoxPenman);
  cyc.meta().set("sent_id", "c");
  acyc.meta().set("sent_id", "a");
  Corpus c;
  c.add(std::move(cyc));
  c.add(std::move(acyc));
  auto only = match_corpus(query::parse_request("global { is_cyclic }"), c);
  REQUIRE(only.size() == 1);
  CHECK(only[0].sent_id == "c");
  CHECK(only[0].nodes.empty());
  CHECK(match_corpus(query::parse_request("pattern { N [concept = boy] } global { is_acyclic }"), c).empty());
  CorpusRatio r = corpus_ratio(query::parse_request("global { is_cyclic }"), c);
  CHECK(r.matching == 1);
  CHECK(r.total == 2);
  CHECK(r.ratio == doctest::Approx(0.5));
}

TEST_CASE("index-driven matching equals the full scan") {
  gen::Rng rng(99);
  for (int round = 0; round < 60; ++round) {
    Corpus c = random_corpus(rng, 25);
    FeatureIndex index(c);
    for (int q = 0; q < 10; ++q) {
      query::Request req = query::parse_request(gen::request(rng));
      Matcher m(req);
      std::vector<Occurrence> with, without;
      m.for_each(c, &index, {}, [&](Occurrence&& o) { with.push_back(std::move(o)); });
      m.for_each(c, nullptr, {}, [&](Occurrence&& o) { without.push_back(std::move(o)); });
      CHECK(with == without);
    }
  }
}

TEST_CASE("feature index postings are exactly the matching nodes") {
  gen::Rng rng(31);
  Corpus c = random_corpus(rng, 50);
  FeatureIndex index(c);
  std::size_t pairs = 0;
  for (const std::string& f : {"concept", "value", "missing"})
    for (const std::string& v : {"a", "b", "c", "1", "2", "z"}) {
      std::vector<Posting> scan;
      for (std::size_t gi = 0; gi < c.size(); ++gi)
        for (NodeId n : c[gi].nodes())
          if (c[gi].features(n).get(f) == v) scan.push_back({gi, n});
      auto got = index.postings(f, v);
      CHECK(std::vector<Posting>(got.begin(), got.end()) == scan);
      pairs += !scan.empty();
    }
  CHECK(index.pair_count() == pairs);
  CHECK(FeatureIndex(c) == index);
}

TEST_CASE("deadline aborts a pathological search") {
  // complete digraph on 30 nodes, five-node path pattern
  SemGraph g;
  std::vector<NodeId> ns;
  for (int i = 0; i < 30; ++i) ns.push_back(g.add_node({{"concept", "a"}}));
  for (NodeId s : ns)
    for (NodeId t : ns)
      if (s != t) g.add_edge(s, t, "x");
  g.seal();
  query::Request req = query::parse_request("pattern { A -> B; B -> C; C -> D; D -> E; E -> F }");
  MatchOptions opts;
  opts.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(20);
  auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(match_graph(req, g, opts), BudgetExceeded);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));
}

TEST_CASE("nested negation on the box chain") {
  SemGraph g = sbn::parse(fixtures::kEverybodyLeftSbn);
  g.seal();
  auto occs = match_graph(query::parse_request("pattern { B1 -[NEGATION]-> B2; B2 -[NEGATION]-> B3 }"), g);
  REQUIRE(occs.size() == 1);
  CHECK(g.name(occs[0].nodes.at("B1")) == "B1");
  CHECK(g.name(occs[0].nodes.at("B3")) == "B3");
  Highlight hl = highlight_of(occs[0]);
  CHECK(hl.nodes.size() == 3);
  CHECK(hl.edges.empty());
}

TEST_CASE("matchers are shareable across threads") {
  gen::Rng rng(1);
  Corpus c = random_corpus(rng, 200);
  FeatureIndex index(c);
  Matcher m(query::parse_request("pattern { N [concept = a]; N -[x]-> M; M [concept <> a] } without { M -> * }"));
  std::size_t expected = count(m, c, &index);
  std::vector<std::size_t> got(6);
  std::vector<std::thread> ts;
  for (std::size_t t = 0; t < got.size(); ++t) ts.emplace_back([&, t] { got[t] = count(m, c, &index); });
  for (auto& t : ts) t.join();
  for (auto n : got) CHECK(n == expected);
}
