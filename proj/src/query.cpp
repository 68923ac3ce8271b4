#include "semgraph/query.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace semgraph::query {

QueryError::QueryError(Kind kind, SourcePosition pos, std::string message, std::vector<std::string> expected)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message),
      kind_(kind),
      pos_(pos),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

std::string QueryError::kind_name() const {
  switch (kind_) {
    case Kind::Syntax: return "SyntaxError";
    case Kind::UnknownIdentifier: return "UnknownIdentifier";
    case Kind::DuplicateIdentifier: return "DuplicateIdentifier";
    case Kind::EmptyRequest: return "EmptyRequest";
    case Kind::UnknownForm: return "UnknownForm";
    case Kind::InvalidRegex: return "InvalidRegex";
  }
  return "QueryError";
}

std::string QueryError::annotate(std::string_view source) const {
  std::ostringstream out;
  out << kind_name() << " at line " << pos_.line << ", column " << pos_.col << ": " << message_ << "\n";
  std::size_t start = 0;
  for (int l = 1; l < pos_.line && start != std::string_view::npos; ++l) {
    start = source.find('\n', start);
    if (start != std::string_view::npos) ++start;
  }
  if (start == std::string_view::npos || start > source.size()) return out.str();
  std::size_t end = source.find('\n', start);
  out << "  " << source.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start) << "\n";
  out << "  " << std::string(static_cast<std::size_t>(std::max(0, pos_.col - 1)), ' ') << "^\n";
  return out.str();
}

std::vector<std::string> PatternBlock::node_idents() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& id) {
    if (!id.empty() && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  for (const auto& n : nodes) add(n.ident);
  for (const auto& e : edges) {
    add(e.source.ident);
    add(e.target.ident);
  }
  return out;
}

std::vector<std::string> PatternBlock::edge_idents() const {
  std::vector<std::string> out;
  for (const auto& e : edges)
    if (e.ident) out.push_back(*e.ident);
  return out;
}

namespace {

enum class Tok {
  Word,
  String,
  Regex,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Semicolon,
  Newline,
  Comma,
  Colon,
  Eq,
  Neq,
  Arrow,      // ->
  EdgeOpen,   // -[
  EdgeClose,  // ]->
  Pipe,
  Star,
  End
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Word: return "identifier";
    case Tok::String: return "string";
    case Tok::Regex: return "regex";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Semicolon: return "';'";
    case Tok::Newline: return "newline";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Eq: return "'='";
    case Tok::Neq: return "'<>'";
    case Tok::Arrow: return "'->'";
    case Tok::EdgeOpen: return "'-['";
    case Tok::EdgeClose: return "']->'";
    case Tok::Pipe: return "'|'";
    case Tok::Star: return "'*'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  SourcePosition pos;
};

bool word_start(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      SourcePosition start = pos_;
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "", start});
        return out;
      }
      char c = src_[i_];
      auto single = [&](Tok t, std::size_t n) {
        std::string text(src_.substr(i_, n));
        for (std::size_t k = 0; k < n; ++k) advance();
        out.push_back({t, std::move(text), start});
      };
      if (c == '\n') single(Tok::Newline, 1);
      else if (c == '{') single(Tok::LBrace, 1);
      else if (c == '}') single(Tok::RBrace, 1);
      else if (c == '[') single(Tok::LBracket, 1);
      else if (c == ']') {
        if (src_.substr(i_, 3) == "]->") single(Tok::EdgeClose, 3);
        else single(Tok::RBracket, 1);
      } else if (c == ';') single(Tok::Semicolon, 1);
      else if (c == ',') single(Tok::Comma, 1);
      else if (c == ':') single(Tok::Colon, 1);
      else if (c == '|') single(Tok::Pipe, 1);
      else if (c == '*') single(Tok::Star, 1);
      else if (c == '=') single(Tok::Eq, 1);
      else if (src_.substr(i_, 2) == "<>" || src_.substr(i_, 2) == "!=") single(Tok::Neq, 2);
      else if (src_.substr(i_, 2) == "->") single(Tok::Arrow, 2);
      else if (src_.substr(i_, 2) == "-[") single(Tok::EdgeOpen, 2);
      else if (c == '"') out.push_back({Tok::String, string_body(start), start});
      else if (src_.substr(i_, 3) == "re\"") {
        advance();
        advance();
        out.push_back({Tok::Regex, string_body(start), start});
      } else if (word_start(c)) {
        std::string w;
        while (i_ < src_.size()) {
          char d = src_[i_];
          bool ok = word_start(d) || d == '.' || d == '\'' ||
                    (d == '-' && src_.substr(i_, 2) != "-[" && src_.substr(i_, 2) != "->");
          if (!ok) break;
          w.push_back(d);
          advance();
        }
        out.push_back({Tok::Word, std::move(w), start});
      } else {
        throw QueryError(QueryError::Kind::Syntax, start, std::string("unexpected character '") + c + "'");
      }
    }
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.col = 1;
    } else {
      ++pos_.col;
    }
    ++i_;
  }

  void skip_blank() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '%' || (c == '/' && src_.substr(i_, 2) == "//")) {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string string_body(SourcePosition start) {
    advance();  // opening quote
    std::string out;
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '"') {
        advance();
        return out;
      }
      if (c == '\n') break;
      if (c == '\\' && i_ + 1 < src_.size() && (src_[i_ + 1] == '"' || src_[i_ + 1] == '\\')) {
        advance();
        c = src_[i_];
      }
      out.push_back(c);
      advance();
    }
    throw QueryError(QueryError::Kind::Syntax, start, "unterminated string literal", {"'\"'"});
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePosition pos_;
};

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

struct Scope {
  std::set<std::string> nodes;
  std::set<std::string> edges;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  Request request() {
    Request req;
    SourcePosition start = peek().pos;
    bool any_block = false;
    std::vector<std::pair<PatternBlock, SourcePosition>> withouts;
    skip_newlines();
    while (peek().kind != Tok::End) {
      const Token& kw = expect(Tok::Word, {"'pattern'", "'without'", "'global'"});
      if (kw.text == "pattern") {
        merge(req.base, block());
      } else if (kw.text == "without") {
        withouts.emplace_back(PatternBlock{}, kw.pos);
        withouts.back().first = block();
      } else if (kw.text == "global") {
        globals(req.globals);
      } else {
        throw QueryError(QueryError::Kind::Syntax, kw.pos, "unknown block keyword '" + kw.text + "'",
                         {"'pattern'", "'without'", "'global'"});
      }
      any_block = true;
      skip_newlines();
    }
    if (!any_block || (req.base.empty() && req.globals.empty()))
      throw QueryError(QueryError::Kind::EmptyRequest, start, "request has no pattern and no global constraint");

    Scope base = validate(req.base, nullptr, start);
    for (auto& [w, pos] : withouts) {
      validate(w, &base, pos);
      req.withouts.push_back(std::move(w));
    }
    return req;
  }

  ClusterKey cluster_key(const Request& req) {
    skip_newlines();
    ClusterKey key;
    const Token& t = expect(Tok::Word, {"'whether'", "ident.feature"});
    Scope base = scope_of(req.base);
    if (t.text == "whether") {
      key.kind = ClusterKey::Kind::Whether;
      key.whether = block();
      validate(key.whether, &base, t.pos);
    } else {
      auto dot = t.text.find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == t.text.size())
        throw QueryError(QueryError::Kind::UnknownForm, t.pos, "cluster key must be 'ident.feature' or 'whether { ... }'",
                         {"'whether'", "ident.feature"});
      key.ident = t.text.substr(0, dot);
      key.feature = t.text.substr(dot + 1);
      if (base.edges.contains(key.ident)) {
        if (key.feature != "label")
          throw QueryError(QueryError::Kind::UnknownForm, t.pos, "edges can only be clustered by 'label'");
        key.kind = ClusterKey::Kind::EdgeLabel;
        key.feature.clear();
      } else if (base.nodes.contains(key.ident)) {
        key.kind = ClusterKey::Kind::NodeFeature;
      } else {
        throw QueryError(QueryError::Kind::UnknownIdentifier, t.pos,
                         "'" + key.ident + "' is not a node or edge of the pattern");
      }
    }
    skip_separators();
    if (peek().kind != Tok::End)
      throw QueryError(QueryError::Kind::Syntax, peek().pos, "unexpected " + std::string(describe(peek().kind)) + " after cluster key",
                       {describe(Tok::End)});
    return key;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }

  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }

  const Token& expect(Tok kind, std::vector<std::string> expected = {}) {
    const Token& t = peek();
    if (t.kind != kind) {
      if (expected.empty()) expected.push_back(describe(kind));
      std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
      if (t.kind == Tok::Newline) found = "newline";
      std::string msg = "expected ";
      for (std::size_t k = 0; k < expected.size(); ++k) msg += (k ? " or " : "") + expected[k];
      throw QueryError(QueryError::Kind::Syntax, t.pos, msg + ", found " + found, std::move(expected));
    }
    return next();
  }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) next();
  }

  void skip_separators() {
    while (peek().kind == Tok::Newline || peek().kind == Tok::Semicolon) next();
  }

  static void merge(PatternBlock& into, PatternBlock from) {
    for (auto& n : from.nodes) add_node(into, std::move(n));
    for (auto& e : from.edges) into.edges.push_back(std::move(e));
    for (auto& r : from.relations) into.relations.push_back(std::move(r));
  }

  static void add_node(PatternBlock& block, NodeConstraint n) {
    for (auto& existing : block.nodes) {
      if (existing.ident == n.ident) {
        for (auto& c : n.clauses) existing.clauses.push_back(std::move(c));
        return;
      }
    }
    block.nodes.push_back(std::move(n));
  }

  PatternBlock block() {
    skip_newlines();
    expect(Tok::LBrace);
    PatternBlock out;
    skip_separators();
    while (peek().kind != Tok::RBrace) {
      item(out);
      if (peek().kind == Tok::RBrace) break;
      if (peek().kind != Tok::Semicolon && peek().kind != Tok::Newline)
        expect(Tok::Semicolon, {"';'", "newline", "'}'"});
      skip_separators();
    }
    next();  // '}'
    return out;
  }

  void globals(std::vector<GlobalConstraint>& out) {
    skip_newlines();
    expect(Tok::LBrace);
    skip_separators();
    while (peek().kind != Tok::RBrace) {
      const Token& t = expect(Tok::Word, {"'is_cyclic'", "'is_acyclic'"});
      if (t.text == "is_cyclic") out.push_back(GlobalConstraint::IsCyclic);
      else if (t.text == "is_acyclic") out.push_back(GlobalConstraint::IsAcyclic);
      else
        throw QueryError(QueryError::Kind::UnknownForm, t.pos, "unknown global constraint '" + t.text + "'",
                         {"'is_cyclic'", "'is_acyclic'"});
      if (peek().kind == Tok::RBrace) break;
      if (peek().kind != Tok::Semicolon && peek().kind != Tok::Newline)
        expect(Tok::Semicolon, {"';'", "newline", "'}'"});
      skip_separators();
    }
    next();
  }

  NodeRef node_ref() {
    if (peek().kind == Tok::Star) {
      next();
      return NodeRef{};
    }
    const Token& t = expect(Tok::Word, {"node identifier", "'*'"});
    if (!is_ident(t.text))
      throw QueryError(QueryError::Kind::Syntax, t.pos, "'" + t.text + "' is not a valid identifier", {"node identifier"});
    return NodeRef{t.text};
  }

  void edge_tail(PatternBlock& out, std::optional<std::string> ident, NodeRef src) {
    EdgeConstraint e;
    e.ident = std::move(ident);
    e.source = std::move(src);
    if (peek().kind == Tok::Arrow) {
      next();
    } else {
      expect(Tok::EdgeOpen, {"'->'", "'-['"});
      while (true) {
        const Token& t = peek();
        if (t.kind != Tok::Word && t.kind != Tok::String)
          expect(Tok::Word, {"edge label"});
        e.labels.push_back(next().text);
        if (peek().kind == Tok::Pipe) {
          next();
          continue;
        }
        expect(Tok::EdgeClose, {"'|'", "']->'"});
        break;
      }
    }
    e.target = node_ref();
    out.edges.push_back(std::move(e));
  }

  void item(PatternBlock& out) {
    const Token& first = peek();
    if (first.kind == Tok::Star) {
      edge_tail(out, std::nullopt, node_ref());
      return;
    }
    const Token& w = expect(Tok::Word, {"node identifier", "edge", "'}'"});
    Tok after = peek().kind;
    if (after == Tok::Colon) {
      if (!is_ident(w.text))
        throw QueryError(QueryError::Kind::Syntax, w.pos, "'" + w.text + "' is not a valid edge identifier");
      next();
      NodeRef src = node_ref();
      edge_tail(out, w.text, std::move(src));
    } else if (after == Tok::Arrow || after == Tok::EdgeOpen) {
      if (!is_ident(w.text))
        throw QueryError(QueryError::Kind::Syntax, w.pos, "'" + w.text + "' is not a valid identifier");
      edge_tail(out, std::nullopt, NodeRef{w.text});
    } else if (after == Tok::LBracket) {
      if (!is_ident(w.text))
        throw QueryError(QueryError::Kind::Syntax, w.pos, "'" + w.text + "' is not a valid identifier");
      next();
      add_node(out, NodeConstraint{w.text, clauses()});
    } else if ((after == Tok::Eq || after == Tok::Neq) && w.text.find('.') != std::string::npos) {
      out.relations.push_back(relation(w));
    } else if (is_ident(w.text) &&
               (after == Tok::Semicolon || after == Tok::Newline || after == Tok::RBrace)) {
      add_node(out, NodeConstraint{w.text, {}});
    } else {
      throw QueryError(QueryError::Kind::Syntax, peek().pos,
                       "unexpected " + std::string(describe(after)) + " after '" + w.text + "'",
                       {"'['", "'->'", "'-['", "':'", "'='"});
    }
  }

  static std::pair<std::string, std::string> split_dotted(const Token& t) {
    auto dot = t.text.find('.');
    std::string ident = t.text.substr(0, dot);
    std::string feat = t.text.substr(dot + 1);
    if (!is_ident(ident) || feat.empty())
      throw QueryError(QueryError::Kind::Syntax, t.pos, "expected ident.feature, found '" + t.text + "'", {"ident.feature"});
    return {ident, feat};
  }

  FeatureRelation relation(const Token& left) {
    FeatureRelation r;
    std::tie(r.left_ident, r.left_feature) = split_dotted(left);
    r.equal = next().kind == Tok::Eq;
    const Token& right = expect(Tok::Word, {"ident.feature"});
    if (right.text.find('.') == std::string::npos)
      throw QueryError(QueryError::Kind::Syntax, right.pos, "expected ident.feature, found '" + right.text + "'",
                       {"ident.feature"});
    std::tie(r.right_ident, r.right_feature) = split_dotted(right);
    r_positions_.push_back({r.left_ident, left.pos});
    r_positions_.push_back({r.right_ident, right.pos});
    return r;
  }

  std::vector<Clause> clauses() {
    std::vector<Clause> out;
    skip_newlines();
    if (peek().kind == Tok::RBracket) {
      next();
      return out;
    }
    while (true) {
      skip_newlines();
      const Token& name = expect(Tok::Word, {"feature name"});
      skip_newlines();
      Tok op = peek().kind;
      if (op == Tok::Eq || op == Tok::Neq) {
        next();
        skip_newlines();
        const Token& v = peek();
        if (v.kind == Tok::Regex) {
          if (op == Tok::Neq)
            throw QueryError(QueryError::Kind::UnknownForm, v.pos, "regular expressions only support '='");
          try {
            std::regex(v.text, std::regex::ECMAScript);
          } catch (const std::regex_error& err) {
            throw QueryError(QueryError::Kind::InvalidRegex, v.pos, std::string("invalid regular expression: ") + err.what());
          }
          out.emplace_back(FeatureRegex{name.text, v.text});
        } else if (v.kind == Tok::String || v.kind == Tok::Word) {
          if (op == Tok::Eq) out.emplace_back(FeatureEq{name.text, v.text});
          else out.emplace_back(FeatureNeq{name.text, v.text});
        } else {
          expect(Tok::String, {"string", "value", "re\"...\""});
        }
        next();
      } else {
        out.emplace_back(FeaturePresent{name.text});
      }
      skip_newlines();
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::RBracket, {"','", "']'"});
      return out;
    }
  }

  Scope scope_of(const PatternBlock& b) const {
    Scope s;
    for (auto& id : b.node_idents()) s.nodes.insert(id);
    for (auto& id : b.edge_idents()) s.edges.insert(id);
    return s;
  }

  SourcePosition position_of(const std::string& ident, SourcePosition fallback) const {
    for (auto& [id, pos] : r_positions_)
      if (id == ident) return pos;
    return fallback;
  }

  /// Checks identifier use in a block; `outer` is the base scope for
  /// without/whether blocks.
  Scope validate(const PatternBlock& b, const Scope* outer, SourcePosition where) {
    Scope s = scope_of(b);
    std::set<std::string> seen_edges;
    for (const auto& id : b.edge_idents()) {
      if (!seen_edges.insert(id).second)
        throw QueryError(QueryError::Kind::DuplicateIdentifier, where, "edge identifier '" + id + "' used twice");
      if (s.nodes.contains(id) || (outer && (outer->nodes.contains(id) || outer->edges.contains(id))))
        throw QueryError(QueryError::Kind::DuplicateIdentifier, where, "identifier '" + id + "' already names another element");
    }
    for (const auto& r : b.relations) {
      for (const auto* id : {&r.left_ident, &r.right_ident}) {
        bool known = s.nodes.contains(*id) || (outer && outer->nodes.contains(*id));
        if (!known)
          throw QueryError(QueryError::Kind::UnknownIdentifier, position_of(*id, where),
                           "'" + *id + "' is not a node of the pattern");
      }
    }
    return s;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::vector<std::pair<std::string, SourcePosition>> r_positions_;
};

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void print_block_body(std::ostringstream& out, const PatternBlock& b) {
  for (const auto& n : b.nodes) {
    out << "  " << n.ident << " [";
    for (std::size_t i = 0; i < n.clauses.size(); ++i) {
      if (i) out << ", ";
      std::visit(
          [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, FeaturePresent>) out << c.name;
            else if constexpr (std::is_same_v<T, FeatureEq>) out << c.name << " = " << quote(c.value);
            else if constexpr (std::is_same_v<T, FeatureNeq>) out << c.name << " <> " << quote(c.value);
            else out << c.name << " = re" << quote(c.pattern);
          },
          n.clauses[i]);
    }
    out << "];\n";
  }
  for (const auto& e : b.edges) {
    out << "  ";
    if (e.ident) out << *e.ident << ": ";
    out << (e.source.wildcard() ? "*" : e.source.ident);
    if (e.labels.empty()) {
      out << " -> ";
    } else {
      out << " -[";
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        if (i) out << "|";
        const auto& l = e.labels[i];
        bool bare = !l.empty() && word_start(l[0]) &&
                    std::all_of(l.begin(), l.end(), [](char c) { return word_start(c) || c == '-' || c == '.' || c == '\''; }) &&
                    l.find("->") == std::string::npos && l.find("-[") == std::string::npos;
        out << (bare ? l : quote(l));
      }
      out << "]-> ";
    }
    out << (e.target.wildcard() ? "*" : e.target.ident) << ";\n";
  }
  for (const auto& r : b.relations)
    out << "  " << r.left_ident << "." << r.left_feature << (r.equal ? " = " : " <> ") << r.right_ident << "."
        << r.right_feature << ";\n";
}

}  // namespace

Request parse_request(std::string_view text) { return Parser(text).request(); }

ClusterKey parse_cluster_key(std::string_view text, const Request& req) { return Parser(text).cluster_key(req); }

std::string print(const PatternBlock& block) {
  std::ostringstream out;
  out << "{\n";
  print_block_body(out, block);
  out << "}";
  return out.str();
}

std::string print(const Request& req) {
  std::ostringstream out;
  if (!req.base.empty()) out << "pattern " << print(req.base) << "\n";
  for (const auto& w : req.withouts) out << "without " << print(w) << "\n";
  if (!req.globals.empty()) {
    out << "global {";
    for (std::size_t i = 0; i < req.globals.size(); ++i)
      out << (i ? "; " : " ") << (req.globals[i] == GlobalConstraint::IsCyclic ? "is_cyclic" : "is_acyclic");
    out << " }\n";
  }
  return out.str();
}

std::string print(const ClusterKey& key) {
  switch (key.kind) {
    case ClusterKey::Kind::NodeFeature: return key.ident + "." + key.feature;
    case ClusterKey::Kind::EdgeLabel: return key.ident + ".label";
    case ClusterKey::Kind::Whether: return "whether " + print(key.whether);
  }
  return {};
}

}  // namespace semgraph::query
