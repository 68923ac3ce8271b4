#ifndef SEMGRAPH_ERRORS_HPP
#define SEMGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace semgraph {

struct SourcePosition {
  int line = 1;  // 1-based
  int col = 1;   // 1-based
};

/// Failure while reading an annotation format. The position is relative to
/// the text handed to the reader.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, DanglingVariable, DuplicateVariable, IndexOutOfRange, Graph };

  ParseError(Kind kind, SourcePosition pos, const std::string& message)
      : std::runtime_error(format(pos, message)), kind_(kind), pos_(pos), message_(message) {}

  Kind kind() const { return kind_; }
  SourcePosition position() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  static std::string format(SourcePosition pos, const std::string& message) {
    return std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
  }

  Kind kind_;
  SourcePosition pos_;
  std::string message_;
};

/// One skipped sentence/document during a corpus load.
struct LoadIssue {
  std::string sent_id;
  std::string message;
};

struct LoadReport {
  std::vector<LoadIssue> skipped;
  std::vector<LoadIssue> warnings;
  bool ok() const { return skipped.empty(); }
};

}  // namespace semgraph

#endif  // SEMGRAPH_ERRORS_HPP
