#ifndef SEMGRAPH_SBN_HPP
#define SEMGRAPH_SBN_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semgraph/errors.hpp"
#include "semgraph/graph.hpp"

namespace semgraph::sbn {

struct RelativeIndex {
  int offset = 0;
  friend bool operator==(RelativeIndex, RelativeIndex) = default;
};

struct Constant {
  std::string text;
  friend bool operator==(const Constant&, const Constant&) = default;
};

using Arg = std::variant<RelativeIndex, Constant>;

struct Line {
  enum class Kind { Sense, Connective };
  Kind kind = Kind::Sense;
  std::string head;
  std::vector<std::pair<std::string, Arg>> args;
  int line_no = 0;
};

/// lemma.pos.NN shape, e.g. `be.v.01`, `prime_number.n.01`.
bool is_sense(std::string_view token);

/// Splits SBN text into lines, stripping `%` comments and blank lines.
/// `warnings` collects unusual but accepted shapes.
std::vector<Line> lex(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Builds the box graph: box node B1 exists up front; each connective line
/// opens a new box reached from an earlier box (relative index counted over
/// boxes, -1 = most recent) and makes it current; each sense line adds a
/// {concept} node with an `in` edge to the current box; relative arguments
/// link sense nodes, constant arguments create {value} nodes in the current box.
SemGraph parse(std::string_view text, std::vector<std::string>* warnings = nullptr);

struct CorpusLoad {
  Corpus corpus;
  LoadReport report;
};

/// Loads a PMB gold tree (`pXX/dYYYY/<lang>.drs.sbn`, sent_id `pXX/dYYYY`,
/// text from the sibling `<lang>.raw`) or a flat archive file of
/// blank-line separated documents with `# ::id` / `# ::snt` headers.
/// `language` filters file prefixes in tree mode; empty accepts all.
CorpusLoad load_corpus(const std::filesystem::path& path, std::string corpus_id = {},
                       std::string_view language = {});

/// Flat archive form of load_corpus over in-memory text.
CorpusLoad parse_archive(std::string_view text, std::string corpus_id = {});

}  // namespace semgraph::sbn

#endif  // SEMGRAPH_SBN_HPP
