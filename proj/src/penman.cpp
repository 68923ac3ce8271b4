#include "semgraph/penman.hpp"

#include <cctype>
#include <optional>
#include <unordered_map>
#include <variant>

namespace semgraph::penman {

namespace {

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '/' || c == '"';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (at_end()) break;
      SourcePosition start = pos_;
      char c = text_[i_];
      if (c == '(') {
        advance();
        out.push_back({TokenKind::LParen, "(", start});
      } else if (c == ')') {
        advance();
        out.push_back({TokenKind::RParen, ")", start});
      } else if (c == '/') {
        advance();
        out.push_back({TokenKind::Slash, "/", start});
      } else if (c == '"') {
        out.push_back({TokenKind::StringLiteral, string_literal(start), start});
      } else if (c == ':') {
        advance();
        std::string role = word();
        if (role.empty()) throw ParseError(ParseError::Kind::Syntax, start, "empty role");
        out.push_back({TokenKind::Role, std::move(role), start});
      } else {
        out.push_back({TokenKind::Symbol, word(), start});
      }
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[i_]))) advance();
  }

  std::string word() {
    std::string out;
    while (!at_end() && !is_delimiter(text_[i_])) {
      out.push_back(text_[i_]);
      advance();
    }
    return out;
  }

  std::string string_literal(SourcePosition start) {
    advance();  // opening quote
    std::string out;
    while (!at_end()) {
      char c = text_[i_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\\' && i_ + 1 < text_.size()) {
        advance();
        c = text_[i_];
      }
      out.push_back(c);
      advance();
    }
    throw ParseError(ParseError::Kind::Syntax, start, "unterminated string literal");
  }

  std::string_view text_;
  std::size_t i_ = 0;
  SourcePosition pos_;
};

struct Atom {
  std::string text;
  bool quoted = false;
};

struct Arg;

struct Expr {
  std::string var;
  std::string concept_name;
  SourcePosition pos;
  std::vector<Arg> args;
};

struct Arg {
  std::string role;
  SourcePosition pos;
  std::variant<Expr, Atom> value;
  SourcePosition value_pos;
  NodeId target{};  // filled while creating nodes
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Expr parse_root() {
    if (tokens_.empty()) throw ParseError(ParseError::Kind::Syntax, {}, "empty Penman text");
    Expr root = expression();
    if (i_ != tokens_.size())
      throw ParseError(ParseError::Kind::Syntax, tokens_[i_].pos,
                       "unexpected '" + tokens_[i_].text + "' after the closing parenthesis");
    return root;
  }

 private:
  const Token& peek() const {
    if (i_ >= tokens_.size()) {
      SourcePosition end = tokens_.empty() ? SourcePosition{} : tokens_.back().pos;
      throw ParseError(ParseError::Kind::Syntax, end, "unexpected end of input");
    }
    return tokens_[i_];
  }

  const Token& expect(TokenKind kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind)
      throw ParseError(ParseError::Kind::Syntax, t.pos, std::string("expected ") + what + ", found '" + t.text + "'");
    ++i_;
    return t;
  }

  Expr expression() {
    Expr e;
    e.pos = expect(TokenKind::LParen, "'('").pos;
    e.var = expect(TokenKind::Symbol, "variable").text;
    expect(TokenKind::Slash, "'/'");
    const Token& head = peek();
    if (head.kind != TokenKind::Symbol && head.kind != TokenKind::StringLiteral)
      throw ParseError(ParseError::Kind::Syntax, head.pos, "expected concept, found '" + head.text + "'");
    e.concept_name = head.text;
    ++i_;
    while (peek().kind == TokenKind::Role) {
      Arg arg;
      arg.role = tokens_[i_].text;
      arg.pos = tokens_[i_].pos;
      ++i_;
      const Token& v = peek();
      arg.value_pos = v.pos;
      switch (v.kind) {
        case TokenKind::LParen:
          arg.value = expression();
          break;
        case TokenKind::Symbol:
          arg.value = Atom{v.text, false};
          ++i_;
          break;
        case TokenKind::StringLiteral:
          arg.value = Atom{v.text, true};
          ++i_;
          break;
        default:
          throw ParseError(ParseError::Kind::Syntax, v.pos,
                           "expected a value for role ':" + arg.role + "', found '" + v.text + "'");
      }
      e.args.push_back(std::move(arg));
    }
    expect(TokenKind::RParen, "')' or a role");
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

bool looks_like_generated_variable(std::string_view s) {
  if (s.size() < 2 || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

class Builder {
 public:
  SemGraph build(Expr& root) {
    collect(root);
    create_nodes(root);
    create_edges(root);
    return std::move(graph_);
  }

 private:
  void collect(const Expr& e) {
    if (!vars_.emplace(e.var, NodeId{}).second)
      throw ParseError(ParseError::Kind::DuplicateVariable, e.pos, "variable '" + e.var + "' defined twice");
    for (const auto& a : e.args)
      if (const auto* sub = std::get_if<Expr>(&a.value)) collect(*sub);
  }

  void create_nodes(Expr& e) {
    vars_[e.var] = graph_.add_node({{"concept", e.concept_name}}, e.var);
    for (auto& a : e.args) {
      if (auto* sub = std::get_if<Expr>(&a.value)) {
        create_nodes(*sub);
        continue;
      }
      const auto& atom = std::get<Atom>(a.value);
      if (!atom.quoted && vars_.contains(atom.text)) continue;
      if (!atom.quoted && looks_like_generated_variable(atom.text))
        throw ParseError(ParseError::Kind::DanglingVariable, a.value_pos,
                         "variable '" + atom.text + "' is referenced but never defined");
      a.target = graph_.add_node({{"value", atom.text}});
    }
  }

  void create_edges(const Expr& e) {
    NodeId self = vars_.at(e.var);
    for (const auto& a : e.args) {
      NodeId target = a.target;
      if (const auto* sub = std::get_if<Expr>(&a.value)) {
        target = vars_.at(sub->var);
      } else if (const auto& atom = std::get<Atom>(a.value); !atom.quoted) {
        if (auto it = vars_.find(atom.text); it != vars_.end()) target = it->second;
      }
      try {
        graph_.add_edge(self, target, a.role);
      } catch (const GraphError& err) {
        throw ParseError(ParseError::Kind::Graph, a.pos, err.what());
      }
      if (const auto* sub = std::get_if<Expr>(&a.value)) create_edges(*sub);
    }
  }

  SemGraph graph_;
  std::unordered_map<std::string, NodeId> vars_;
};

SourcePosition shift(SourcePosition p, int line_offset) { return {p.line + line_offset, p.col}; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

SemGraph parse(std::string_view text) {
  Expr root = Parser(tokenize(text)).parse_root();
  return Builder().build(root);
}

std::vector<std::pair<std::string, std::string>> parse_header(std::string_view line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t at = line.find("::");
  while (at != std::string_view::npos) {
    std::size_t key_begin = at + 2;
    std::size_t key_end = key_begin;
    while (key_end < line.size() && !std::isspace(static_cast<unsigned char>(line[key_end]))) ++key_end;
    std::string key(line.substr(key_begin, key_end - key_begin));
    std::size_t next = std::string_view::npos;
    if (key != "snt" && key != "tok") {
      // next " ::" starts another key
      for (std::size_t j = line.find("::", key_end); j != std::string_view::npos; j = line.find("::", j + 2)) {
        if (j > 0 && std::isspace(static_cast<unsigned char>(line[j - 1]))) {
          next = j;
          break;
        }
      }
    }
    std::string_view raw = line.substr(key_end, next == std::string_view::npos ? std::string_view::npos : next - key_end);
    std::size_t b = raw.find_first_not_of(" \t\r");
    std::size_t e = raw.find_last_not_of(" \t\r");
    std::string value = b == std::string_view::npos ? std::string() : std::string(raw.substr(b, e - b + 1));
    if (!key.empty()) out.emplace_back(std::move(key), std::move(value));
    at = next;
  }
  return out;
}

std::vector<Block> split_blocks(std::string_view text) {
  std::vector<Block> out;
  Block current;
  int line_no = 0;

  auto flush = [&] {
    if (current.body.find_first_not_of(" \t\r\n") != std::string::npos) {
      for (auto& [k, v] : current.header)
        if (k == "id") current.sent_id = v;
      out.push_back(std::move(current));
    }
    current = Block{};
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      flush();
    } else if (line[first] == '#') {
      if (!current.body.empty()) flush();
      for (auto& kv : parse_header(line)) current.header.push_back(std::move(kv));
    } else {
      if (current.body.empty()) current.body_line = line_no;
      current.body.append(line);
      current.body.push_back('\n');
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  flush();
  return out;
}

CorpusLoad parse_corpus(std::string_view text, std::string corpus_id) {
  CorpusLoad result{Corpus(std::move(corpus_id)), {}};
  std::size_t ordinal = 0;
  for (auto& block : split_blocks(text)) {
    ++ordinal;
    std::string sid = block.sent_id.empty() ? "#" + std::to_string(ordinal) : block.sent_id;
    try {
      SemGraph g = parse(block.body);
      for (auto& [k, v] : block.header) {
        if (k == "id") continue;
        g.meta().set(k == "snt" ? "text" : k, v);
      }
      g.meta().set("sent_id", sid);
      result.corpus.add(std::move(g));
    } catch (const ParseError& err) {
      SourcePosition p = shift(err.position(), block.body_line - 1);
      result.report.skipped.push_back(
          {sid, std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + err.message()});
    } catch (const CorpusError& err) {
      result.report.skipped.push_back({sid, err.what()});
    }
  }
  return result;
}

}  // namespace semgraph::penman
