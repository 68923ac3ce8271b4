#ifndef SEMGRAPH_PENMAN_HPP
#define SEMGRAPH_PENMAN_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semgraph/errors.hpp"
#include "semgraph/graph.hpp"

namespace semgraph::penman {

enum class TokenKind { LParen, RParen, Slash, Role, Symbol, StringLiteral };

struct Token {
  TokenKind kind;
  std::string text;  // roles without ':', string literals unquoted
  SourcePosition pos;
};

/// Splits Penman text into tokens. Throws ParseError on an unterminated string.
std::vector<Token> tokenize(std::string_view text);

/// Parses one Penman expression into an unsealed graph.
///
/// `(v / c ...)` yields a node {concept: c} named v; constants (numbers,
/// string literals, `-`, `+`, unbound symbols) yield fresh {value: ...} nodes;
/// every `:role arg` yields an edge labelled with the role verbatim.
/// Re-used variables resolve to the node they name, including forward
/// references. A symbol shaped like a generated variable (one letter then
/// digits, e.g. `s2`) that is never defined raises DanglingVariable.
SemGraph parse(std::string_view text);

/// `# ::key value ::key2 value2` header line to key/value pairs. `snt` and
/// `tok` swallow the rest of the line. Lines without `::` give no pairs.
std::vector<std::pair<std::string, std::string>> parse_header(std::string_view line);

/// A blank-line separated chunk of an annotation release: `#` header pairs
/// followed by the annotation body. Chunks with no body are dropped.
struct Block {
  std::vector<std::pair<std::string, std::string>> header;
  std::string sent_id;  // value of `::id`, may be empty
  std::string body;
  int body_line = 1;  // line of the first body line in the whole text
};

std::vector<Block> split_blocks(std::string_view text);

struct CorpusLoad {
  Corpus corpus;
  LoadReport report;
};

/// Parses a blank-line separated AMR release file. `::id` becomes
/// meta.sent_id, `::snt` meta.text; other header keys are kept verbatim.
/// Blocks that fail to parse are reported and skipped.
CorpusLoad parse_corpus(std::string_view text, std::string corpus_id = {});

}  // namespace semgraph::penman

#endif  // SEMGRAPH_PENMAN_HPP
