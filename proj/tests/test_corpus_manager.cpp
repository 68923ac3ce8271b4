#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "semgraph/corpus_manager.hpp"

using namespace semgraph;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SEMGRAPH_TEST_DATA;

std::string config_error(std::string_view text) {
  try {
    parse_config(text, kData);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config tables") {
  CorpusConfig cfg = parse_config(R"(# corpora
[[corpus]]
id = "lpp"          # The Little Prince
format = "penman"
path = "amr/lpp.txt"

[[corpus]]
id = pmb-en
format = sbn
path = "/abs/pmb"
language = "en"
)",
                                  "/base");
  REQUIRE(cfg.corpora.size() == 2);
  CHECK(cfg.corpora[0] == CorpusSpec{"lpp", CorpusFormat::Penman, "/base/amr/lpp.txt", ""});
  CHECK(cfg.corpora[1] == CorpusSpec{"pmb-en", CorpusFormat::Sbn, "/abs/pmb", "en"});
}

TEST_CASE("config errors") {
  CHECK(config_error("[[corpus]]\nid = \"a\"\nformat = \"penman\"\npath = \"x\"\n[[corpus]]\nid = \"a\"\nformat = "
                     "\"sbn\"\npath = \"y\"\n")
            .find("duplicate corpus id") != std::string::npos);
  CHECK(config_error("[[corpus]]\nid = \"a\"\nformat = \"ucca\"\npath = \"x\"\n").find("unknown format") !=
        std::string::npos);
  CHECK(config_error("[[corpus]]\nid = \"a\"\nformat = \"sbn\"\n").find("lacks `path`") != std::string::npos);
  CHECK(config_error("id = \"a\"\n").find("outside") != std::string::npos);
  CHECK(config_error("[[corpus]]\nid = \"a\nformat = \"sbn\"\n").find("line 2") != std::string::npos);
  CHECK(config_error("[[corpus]]\ncolour = \"red\"\n").find("unknown key") != std::string::npos);
  CHECK(config_error("[corpus]\n").find("expected [[corpus]]") != std::string::npos);
  CHECK(config_error("").empty());
}

TEST_CASE("missing corpus path is reported by name") {
  CorpusConfig cfg;
  cfg.corpora.push_back({"ghost", CorpusFormat::Penman, "/no/such/amr.txt", ""});
  try {
    load_all(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/no/such/amr.txt") != std::string::npos);
  }
  cfg.corpora[0] = {"x", CorpusFormat::Penman, kData / "amr_sample.txt", ""};
  cfg.corpora.push_back(cfg.corpora[0]);
  CHECK_THROWS_AS(load_all(cfg), ConfigError);
}

TEST_CASE("config path from flag or environment") {
  CHECK(config_path("a.toml") == fs::path("a.toml"));
  setenv("SEMGRAPH_CONFIG", "/etc/semgraph.toml", 1);
  CHECK(config_path("") == fs::path("/etc/semgraph.toml"));
  CHECK(config_path("b.toml") == fs::path("b.toml"));
  unsetenv("SEMGRAPH_CONFIG");
  CHECK_FALSE(config_path("").has_value());
}

TEST_CASE("registry over the shipped samples") {
  Registry reg = load_all(read_config(kData / "semgraph.toml"));
  REQUIRE(reg.size() == 4);
  CHECK(reg.entries()[0].spec.id == "amr-sample");
  CHECK(reg.entries()[3].spec.id == "quantml-sample");
  CHECK(reg.at("amr-sample").corpus->size() == 8);
  CHECK(reg.at("pmb-sample-en").corpus->size() == 3);
  CHECK(reg.at("pmb-sample-de").corpus->size() == 1);
  CHECK(reg.at("quantml-sample").corpus->size() == 1);
  for (const auto& e : reg.entries()) {
    CHECK(e.report.ok());
    CHECK(e.corpus->id() == e.spec.id);
    CHECK(*e.index == FeatureIndex(*e.corpus));
  }
  CHECK(reg.find("nope") == nullptr);
  CHECK_THROWS_AS(reg.at("nope"), UnknownCorpus);
  CHECK_THROWS_AS(reg.stats("nope"), UnknownCorpus);
}

TEST_CASE("reloading gives an equal registry") {
  auto cfg = read_config(kData / "semgraph.toml");
  Registry a = load_all(cfg), b = load_all(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Corpus &ca = *a.entries()[i].corpus, &cb = *b.entries()[i].corpus;
    REQUIRE(ca.size() == cb.size());
    for (std::size_t g = 0; g < ca.size(); ++g) {
      CHECK(ca[g].meta() == cb[g].meta());
      CHECK(ca[g].node_count() == cb[g].node_count());
      for (EdgeId e : ca[g].edges()) CHECK(ca[g].edge(e).label == cb[g].edge(e).label);
    }
    CHECK(*a.entries()[i].index == *b.entries()[i].index);
  }
}

TEST_CASE("statistics") {
  Registry reg = load_all(read_config(kData / "semgraph.toml"));
  for (const auto& e : reg.entries()) {
    CorpusStats s = reg.stats(e.spec.id);
    std::size_t nodes = 0, edges = 0, sum = 0;
    for (const SemGraph& g : *e.corpus) {
      nodes += g.node_count();
      edges += g.edge_count();
    }
    for (const auto& [label, n] : s.labels) sum += n;
    CHECK(s.graphs == e.corpus->size());
    CHECK(s.nodes == nodes);
    CHECK(s.edges == edges);
    CHECK(sum == s.edges);
  }
  CorpusStats amr = reg.stats("amr-sample");
  CHECK(amr.cyclic == 1);  // the boy who wants to be believed
  CHECK(amr.labels.at("ARG0-of") == 1);
  CorpusStats pmb = reg.stats("pmb-sample-en");
  CHECK(pmb.labels.at("NEGATION") == 3);

  CorpusStats empty = compute_stats(Corpus("empty"));
  CHECK(empty.graphs == 0);
  CHECK(empty.nodes == 0);
  CHECK(empty.edges == 0);
  CHECK(empty.labels.empty());
}

TEST_CASE("unreadable corpus content is reported, the rest still loads") {
  fs::path dir = fs::temp_directory_path() / "semgraph_cm_bad";
  fs::create_directories(dir);
  fs::path bad = dir / "bad.json";
  { std::ofstream(bad) << "[{\"nodes\": 1}, "; }
  CorpusConfig cfg;
  cfg.corpora.push_back({"bad", CorpusFormat::Interchange, bad, ""});
  cfg.corpora.push_back({"amr", CorpusFormat::Penman, kData / "amr_sample.txt", ""});
  Registry reg = load_all(cfg);
  CHECK(reg.at("bad").corpus->empty());
  CHECK_FALSE(reg.at("bad").report.ok());
  CHECK(reg.at("amr").corpus->size() == 8);
  fs::remove_all(dir);
}
