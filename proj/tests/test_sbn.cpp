#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "semgraph/sbn.hpp"

using namespace semgraph;
namespace fs = std::filesystem;

namespace {

std::vector<NodeId> boxes(const SemGraph& g) {
  std::vector<NodeId> out;
  for (NodeId n : g.nodes())
    if (g.features(n).contains("box")) out.push_back(n);
  return out;
}

std::size_t count_label(const SemGraph& g, std::string_view label) {
  std::size_t n = 0;
  for (EdgeId e : g.edges()) n += g.edge(e).label_text() == label;
  return n;
}

NodeId concept_node(const SemGraph& g, std::string_view concept_name) {
  for (NodeId n : g.nodes())
    if (g.features(n).get("concept") == concept_name) return n;
  FAIL("no concept " << concept_name);
  return {};
}

NodeId target_of(const SemGraph& g, NodeId src, std::string_view label) {
  for (const auto& a : g.successors(src))
    if (g.edge(a.edge).label_text() == label) return a.node;
  FAIL("no " << label << " edge");
  return {};
}

void write(const fs::path& p, std::string_view text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("prime number sentence: two boxes, a negation, three memberships") {
  SemGraph g = sbn::parse(fixtures::kPrimeSbn);
  auto bs = boxes(g);
  REQUIRE(bs.size() == 2);
  CHECK(g.name(bs[0]) == "B1");
  CHECK(g.name(bs[1]) == "B2");
  CHECK(g.features(bs[0]).get("box") == "B1");

  CHECK(count_label(g, "in") == 3);
  CHECK(count_label(g, "NEGATION") == 1);
  CHECK(target_of(g, bs[0], "NEGATION") == bs[1]);

  NodeId be = concept_node(g, "be.v.01");
  NodeId prime = concept_node(g, "prime_number.n.01");
  CHECK(target_of(g, be, "Co-Theme") == prime);
  CHECK(g.features(target_of(g, be, "Theme")) == FeatureStructure{{"value", "15"}});
  // everything after the connective sits in B2
  for (EdgeId e : g.edges())
    if (g.edge(e).label_text() == "in") CHECK(g.edge(e).target == bs[1]);
  CHECK(g.node_count() == 5);
  CHECK(g.edge_count() == 6);
}

TEST_CASE("nested negations form a box chain") {
  SemGraph g = sbn::parse(fixtures::kEverybodyLeftSbn);
  auto bs = boxes(g);
  REQUIRE(bs.size() == 3);
  CHECK(target_of(g, bs[0], "NEGATION") == bs[1]);
  CHECK(target_of(g, bs[1], "NEGATION") == bs[2]);
  NodeId leave = concept_node(g, "leave.v.01");
  CHECK(target_of(g, leave, "Agent") == concept_node(g, "person.n.01"));
  CHECK(target_of(g, leave, "Time") == concept_node(g, "time.n.08"));
  CHECK(target_of(g, concept_node(g, "person.n.01"), "in") == bs[1]);
  CHECK(target_of(g, leave, "in") == bs[2]);
  CHECK(count_label(g, "in") == 4);  // three senses and the constant `now`
}

TEST_CASE("lexing strips comments and classifies lines") {
  auto lines = sbn::lex("%%% header\nfox.n.01   % the fox\n\n NEGATION -1 \nsee.v.01 Experiencer -1 Stimulus \"a b\"\n");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].kind == sbn::Line::Kind::Sense);
  CHECK(lines[0].head == "fox.n.01");
  CHECK(lines[0].line_no == 2);
  CHECK(lines[1].kind == sbn::Line::Kind::Connective);
  CHECK(std::get<sbn::RelativeIndex>(lines[1].args[0].second).offset == -1);
  CHECK(lines[2].args.size() == 2);
  CHECK(std::get<sbn::Constant>(lines[2].args[1].second).text == "a b");
}

TEST_CASE("sense shape") {
  CHECK(sbn::is_sense("be.v.01"));
  CHECK(sbn::is_sense("prime_number.n.01"));
  CHECK(sbn::is_sense("time.n.08"));
  CHECK_FALSE(sbn::is_sense("NEGATION"));
  CHECK_FALSE(sbn::is_sense("be.v"));
  CHECK_FALSE(sbn::is_sense("15"));
}

TEST_CASE("indices out of range and malformed lines") {
  auto kind_of = [](std::string_view text) {
    try {
      sbn::parse(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error for " << text);
    return ParseError::Kind::Syntax;
  };
  CHECK(kind_of("fox.n.01 Theme +1\n") == ParseError::Kind::IndexOutOfRange);
  CHECK(kind_of("fox.n.01 Theme -1\n") == ParseError::Kind::IndexOutOfRange);
  CHECK(kind_of("NEGATION -2\nfox.n.01\n") == ParseError::Kind::IndexOutOfRange);
  CHECK(kind_of("(r / fox)\n") == ParseError::Kind::Syntax);
  CHECK(kind_of("fox.n.01 Theme\n") == ParseError::Kind::Syntax);
}

TEST_CASE("gold tree layout") {
  fs::path root = fs::temp_directory_path() / "semgraph_sbn_tree";
  fs::remove_all(root);
  write(root / "en/gold/p52/d2324/en.drs.sbn", fixtures::kPrimeSbn);
  write(root / "en/gold/p52/d2324/en.raw", "Fifteen is not a prime number.\n");
  write(root / "en/gold/p18/d1454/en.drs.sbn", fixtures::kEverybodyLeftSbn);
  write(root / "en/gold/p18/d1454/de.drs.sbn", fixtures::kEverybodyLeftSbn);
  write(root / "en/gold/p00/d0001/en.drs.sbn", "fox.n.01 Theme +3\n");

  auto load = sbn::load_corpus(root, "pmb-en", "en");
  REQUIRE(load.corpus.size() == 2);
  CHECK(load.corpus[0].sent_id() == "p18/d1454");
  CHECK(load.corpus[1].sent_id() == "p52/d2324");
  CHECK(load.corpus[1].text() == "Fifteen is not a prime number.");
  REQUIRE(load.report.skipped.size() == 1);
  CHECK(load.report.skipped[0].sent_id == "p00/d0001");

  auto all = sbn::load_corpus(root, "pmb", "");
  CHECK(all.corpus.size() == 2);  // the de file duplicates p18/d1454
  CHECK(all.report.skipped.size() == 2);
  fs::remove_all(root);
}

TEST_CASE("archive layout") {
  std::string text = "# ::id p52/d2324\n# ::snt Fifteen is not a prime number.\n" + std::string(fixtures::kPrimeSbn) +
                     "\n# ::id p18/d1454\n" + std::string(fixtures::kEverybodyLeftSbn);
  auto load = sbn::parse_archive(text, "arch");
  REQUIRE(load.corpus.size() == 2);
  CHECK(load.corpus[0].text() == "Fifteen is not a prime number.");
  CHECK(load.corpus[1].sent_id() == "p18/d1454");
  CHECK(load.report.ok());
}
