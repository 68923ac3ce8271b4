#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "semgraph/corpus_manager.hpp"
#include "semgraph/interchange.hpp"
#include "semgraph/matcher.hpp"
#include "semgraph/penman.hpp"

using namespace semgraph;
namespace fs = std::filesystem;

namespace {

const std::string kConfig = std::string(SEMGRAPH_TEST_DATA) + "/semgraph.toml";

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

Result grep(std::vector<std::string> extra) {
  std::vector<std::string> args = {"--config", kConfig, "grep"};
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

}  // namespace

TEST_CASE("convert penman from stdin to dot") {
  Result r = run({"convert", "--from", "penman", "--to", "dot"}, std::string(fixtures::kFoxPenman));
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("digraph G {"));
  CHECK(r.out.find("\"k\" -> \"i\" [label=\"ARG0\"]") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("convert with the wrong reader fails with the sentence id") {
  Result r = run({"convert", "--from", "sbn", std::string(SEMGRAPH_TEST_DATA) + "/amr_sample.txt"});
  CHECK(r.code == 1);
  CHECK(r.err.find("sample.1") != std::string::npos);
}

TEST_CASE("interchange to interchange is idempotent") {
  Result once = run({"convert", "--from", "penman"}, std::string(fixtures::kFoxPenman));
  REQUIRE(once.code == 0);
  Result twice = run({"convert", "--from", "interchange"}, once.out);
  CHECK(twice.code == 0);
  CHECK(twice.out == once.out);

  Result many = run({"convert", "--from", "penman", std::string(SEMGRAPH_TEST_DATA) + "/amr_sample.txt"});
  REQUIRE(many.code == 0);
  Result many2 = run({"convert", "--from", "interchange"}, many.out);
  CHECK(many2.out == many.out);
  CHECK(nlohmann::json::parse(many.out).size() == 8);
}

TEST_CASE("convert writes to a file") {
  fs::path out = fs::temp_directory_path() / "semgraph_cli_out.json";
  Result r = run({"convert", "--from", "penman", "-o", out.string()}, std::string(fixtures::kFoxPenman));
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(interchange::read_graph(ss.str()).node_count() == 7);
  fs::remove(out);
}

TEST_CASE("grep default, count and json output") {
  const std::string req = R"(pattern { N [concept = "say-01"] })";
  Result lines = grep({"--corpus", "amr-sample", "--request", req});
  CHECK(lines.code == 0);
  CHECK(lines.out == "sample.2\tN=s\nsample.3\tN=s\nsample.4\tN=s\nsample.8\tN=s2\n");

  Result count = grep({"--corpus", "amr-sample", "--request", req, "--count"});
  CHECK(count.out == "4\n");

  Result js = grep({"--corpus", "amr-sample", "--request", req, "--json"});
  auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["total"] == 4);
  CHECK(doc["items"][3]["sent_id"] == "sample.8");
  CHECK(doc["items"][3]["bindings"]["nodes"]["N"] == "s2");
}

TEST_CASE("grep with named edges prints edge bindings") {
  Result r = grep({"--corpus", "amr-sample", "--request", "pattern { e: M -[poss]-> N }"});
  CHECK(r.out == "sample.1\tM=f N=i e=f-[poss]->i\n");
}

TEST_CASE("grep clusters") {
  Result r = grep({"--corpus", "amr-sample", "--request", R"(pattern { N [concept = re"make-.*"] })", "--cluster",
                   "N.concept"});
  CHECK(r.code == 0);
  CHECK(r.out == "make-01     1\nmake-02     1\nmake-up-07  1\n");

  Result w = grep({"--corpus", "amr-sample", "--request", R"(pattern { N [concept = "and"] })", "--cluster",
                   "whether { N -[op1]-> X }", "--json"});
  auto doc = nlohmann::json::parse(w.out);
  CHECK(doc["total"] == 3);
  CHECK(doc["clusters"][0] == nlohmann::json{{"value", "yes"}, {"count", 2}});
  CHECK(doc["clusters"][1] == nlohmann::json{{"value", "no"}, {"count", 1}});
}

TEST_CASE("grep from a request file") {
  fs::path file = fs::temp_directory_path() / "semgraph_cli_req.txt";
  std::ofstream(file) << "pattern {\n  B1 -[NEGATION]-> B2;\n  B2 -[NEGATION]-> B3\n}\n";
  Result r = grep({"--corpus", "pmb-sample-en", "--request-file", file.string(), "--count"});
  CHECK(r.out == "1\n");
  Result both = grep({"--corpus", "pmb-sample-en", "--request-file", file.string(), "--request", "pattern { N }"});
  CHECK(both.code == 2);
  fs::remove(file);
}

TEST_CASE("grep errors") {
  Result syntax = grep({"--corpus", "amr-sample", "--request", "pattern {\n  N [concept = ]\n}"});
  CHECK(syntax.code == 1);
  CHECK(syntax.err.find("line 2") != std::string::npos);
  CHECK(syntax.err.find("    N [concept = ]\n                 ^") != std::string::npos);

  CHECK(grep({"--corpus", "nope", "--request", "pattern { N }"}).code == 2);
  CHECK(grep({"--corpus", "amr-sample"}).code == 2);
  CHECK(grep({"--corpus", "amr-sample", "--request", "pattern { N }", "--cluster", "Q.x"}).code == 1);

  Result none = grep({"--corpus", "amr-sample", "--request", R"(pattern { N [concept = "zebra"] })", "--count"});
  CHECK(none.code == 0);
  CHECK(none.out == "0\n");
}

TEST_CASE("count agrees with the library") {
  auto entry = load_corpus(CorpusSpec{"amr", CorpusFormat::Penman, fs::path(SEMGRAPH_TEST_DATA) / "amr_sample.txt", ""});
  for (const char* req : {"pattern { N [concept] }", "pattern { M -> N }", "pattern { N [concept = he] }",
                          "pattern { M -[name]-> N } without { M -[wiki]-> * }", "global { is_cyclic }"}) {
    Result r = grep({"--corpus", "amr-sample", "--request", req, "--count"});
    CHECK(r.out == std::to_string(match_corpus(query::parse_request(req), *entry.corpus).size()) + "\n");
  }
}

TEST_CASE("lint packs") {
  Result amr = run({"--config", kConfig, "lint", "--corpus", "amr-sample", "--pack", "amr"});
  CHECK(amr.code == 0);
  CHECK(amr.out == "name-without-wiki: 1 occurrence in 1 graph (50.0% of 2)\n  e.g. sample.6\n");

  Result pmb = run({"--config", kConfig, "lint", "--corpus", "pmb-sample-en", "--pack", "pmb"});
  CHECK(pmb.code == 0);
  CHECK(pmb.out.find("agent-equals-patient: 1 occurrence in 1 graph\n  e.g. p62/d1397\n") != std::string::npos);
  CHECK(pmb.out.find("double-negation: 1 occurrence in 1 graph\n  e.g. p18/d1454\n") != std::string::npos);

  // advisory: a pack that finds nothing still succeeds
  Result clean = run({"--config", kConfig, "lint", "--corpus", "quantml-sample", "--pack", "pmb"});
  CHECK(clean.code == 0);
  CHECK(clean.out == "agent-equals-patient: 0 occurrences in 0 graphs\ndouble-negation: 0 occurrences in 0 graphs\n");

  CHECK(run({"--config", kConfig, "lint", "--corpus", "amr-sample", "--pack", "ucca"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"convert", "--from", "xml"}).code == 2);
  CHECK(run({"convert", "--from", "penman", "/no/such/file"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  unsetenv("SEMGRAPH_CONFIG");
  CHECK(run({"grep", "--corpus", "x", "--request", "pattern { N }"}).code == 2);
  setenv("SEMGRAPH_CONFIG", kConfig.c_str(), 1);
  CHECK(run({"grep", "--corpus", "amr-sample", "--request", "pattern { N }", "--count"}).out == "46\n");
  unsetenv("SEMGRAPH_CONFIG");
}

TEST_CASE("stats") {
  Result r = run({"--config", kConfig, "stats", "--corpus", "pmb-sample-en", "--json"});
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["graphs"] == 3);
  CHECK(doc["labels"][0]["label"] == "in");
}

#ifdef SEMGRAPH_CLI_PATH
TEST_CASE("the installed binary") {
  std::string cmd = std::string(SEMGRAPH_CLI_PATH) + " --config " + kConfig +
                    " grep --corpus amr-sample --request 'pattern { N [concept = \"say-01\"] }' --count";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[64] = {};
  std::string out;
  while (fgets(buf, sizeof buf, pipe)) out += buf;
  int status = pclose(pipe);
  CHECK(status == 0);
  CHECK(out == "4\n");

  std::string bad = std::string(SEMGRAPH_CLI_PATH) + " grep --corpus x --request 'pattern {' --request-file y 2>/dev/null";
  CHECK(WEXITSTATUS(pclose(popen(bad.c_str(), "r"))) == 2);
}
#endif
