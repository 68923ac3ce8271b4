#include "semgraph/sbn.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "semgraph/penman.hpp"

namespace semgraph::sbn {

namespace fs = std::filesystem;

namespace {

struct RawToken {
  std::string text;
  bool quoted = false;
  int col = 1;
};

std::vector<RawToken> split_line(std::string_view line, int line_no) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '%') break;
    RawToken tok;
    tok.col = static_cast<int>(i) + 1;
    if (c == '"') {
      tok.quoted = true;
      std::size_t close = line.find('"', i + 1);
      if (close == std::string_view::npos)
        throw ParseError(ParseError::Kind::Syntax, {line_no, tok.col}, "unterminated string literal");
      tok.text = std::string(line.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      std::size_t end = i;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      tok.text = std::string(line.substr(i, end - i));
      i = end;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

std::optional<int> relative_index(const RawToken& tok) {
  if (tok.quoted || tok.text.size() < 2) return std::nullopt;
  char sign = tok.text[0];
  if (sign != '+' && sign != '-' && sign != '<' && sign != '>') return std::nullopt;
  if (!std::all_of(tok.text.begin() + 1, tok.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return std::nullopt;
  int k = std::stoi(tok.text.substr(1));
  return (sign == '-' || sign == '<') ? -k : k;
}

bool is_connective_head(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool is_sense(std::string_view token) {
  // lemma . pos-letter . digits
  std::size_t last = token.rfind('.');
  if (last == std::string_view::npos || last + 1 >= token.size() || last < 3) return false;
  if (!std::all_of(token.begin() + last + 1, token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  if (token[last - 2] != '.' || !std::islower(static_cast<unsigned char>(token[last - 1]))) return false;
  return last - 2 > 0;
}

std::vector<Line> lex(std::string_view text, std::vector<std::string>* warnings) {
  std::vector<Line> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    auto toks = split_line(raw, line_no);
    if (!toks.empty()) {
      Line line;
      line.line_no = line_no;
      line.head = toks[0].text;
      std::size_t first_arg = 1;
      if (toks[0].quoted)
        throw ParseError(ParseError::Kind::Syntax, {line_no, toks[0].col}, "line head must not be a string literal");
      if (is_sense(line.head)) {
        line.kind = Line::Kind::Sense;
      } else if (toks.size() > 1 && relative_index(toks[1])) {
        line.kind = Line::Kind::Connective;
        if (!is_connective_head(line.head) && warnings)
          warnings->push_back("line " + std::to_string(line_no) + ": unusual connective '" + line.head + "'");
        line.args.emplace_back(line.head, RelativeIndex{*relative_index(toks[1])});
        first_arg = 2;
      } else {
        throw ParseError(ParseError::Kind::Syntax, {line_no, toks[0].col},
                         "'" + line.head + "' is neither a sense nor a box connective");
      }
      if ((toks.size() - first_arg) % 2 != 0)
        throw ParseError(ParseError::Kind::Syntax, {line_no, toks.back().col},
                         "role '" + toks.back().text + "' has no argument");
      for (std::size_t i = first_arg; i < toks.size(); i += 2) {
        if (toks[i].quoted)
          throw ParseError(ParseError::Kind::Syntax, {line_no, toks[i].col}, "role must not be a string literal");
        if (auto k = relative_index(toks[i + 1])) {
          line.args.emplace_back(toks[i].text, RelativeIndex{*k});
        } else if (line.kind == Line::Kind::Connective) {
          throw ParseError(ParseError::Kind::Syntax, {line_no, toks[i + 1].col},
                           "box relation '" + toks[i].text + "' needs a relative index");
        } else {
          line.args.emplace_back(toks[i].text, Constant{toks[i + 1].text});
        }
      }
      out.push_back(std::move(line));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

SemGraph parse(std::string_view text, std::vector<std::string>* warnings) {
  auto lines = lex(text, warnings);

  SemGraph g;
  std::vector<NodeId> boxes;
  std::vector<NodeId> senses;
  auto new_box = [&] {
    std::string name = "B" + std::to_string(boxes.size() + 1);
    boxes.push_back(g.add_node({{"box", name}}, name));
    return boxes.back();
  };
  new_box();

  // Sense nodes first pass, so forward references (+k) resolve.
  std::vector<NodeId> sense_of_line(lines.size());
  std::vector<NodeId> box_of_line(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.kind == Line::Kind::Connective) {
      std::size_t from_boxes = boxes.size();
      NodeId box = new_box();
      for (const auto& [role, arg] : line.args) {
        int k = std::get<RelativeIndex>(arg).offset;
        long src = static_cast<long>(from_boxes) + k;
        if (k >= 0 || src < 0)
          throw ParseError(ParseError::Kind::IndexOutOfRange, {line.line_no, 1},
                           "box index " + std::to_string(k) + " does not name an earlier box");
        try {
          g.add_edge(boxes[static_cast<std::size_t>(src)], box, role);
        } catch (const GraphError& err) {
          throw ParseError(ParseError::Kind::Graph, {line.line_no, 1}, err.what());
        }
      }
      box_of_line[i] = box;
    } else {
      std::string name = "s" + std::to_string(senses.size() + 1);
      senses.push_back(g.add_node({{"concept", line.head}}, name));
      sense_of_line[i] = senses.back();
      box_of_line[i] = boxes.back();
      g.add_edge(senses.back(), boxes.back(), "in");
    }
  }

  std::size_t sense_ordinal = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.kind != Line::Kind::Sense) continue;
    NodeId self = sense_of_line[i];
    for (const auto& [role, arg] : line.args) {
      try {
        if (const auto* idx = std::get_if<RelativeIndex>(&arg)) {
          long target = static_cast<long>(sense_ordinal) + idx->offset;
          if (target < 0 || target >= static_cast<long>(senses.size()))
            throw ParseError(ParseError::Kind::IndexOutOfRange, {line.line_no, 1},
                             "relative index " + std::to_string(idx->offset) + " of role '" + role +
                                 "' points outside the document");
          g.add_edge(self, senses[static_cast<std::size_t>(target)], role);
        } else {
          NodeId c = g.add_node({{"value", std::get<Constant>(arg).text}});
          g.add_edge(c, box_of_line[i], "in");
          g.add_edge(self, c, role);
        }
      } catch (const GraphError& err) {
        throw ParseError(ParseError::Kind::Graph, {line.line_no, 1}, err.what());
      }
    }
    ++sense_ordinal;
  }
  return g;
}

CorpusLoad parse_archive(std::string_view text, std::string corpus_id) {
  CorpusLoad result{Corpus(std::move(corpus_id)), {}};
  std::size_t ordinal = 0;
  for (auto& block : penman::split_blocks(text)) {
    ++ordinal;
    std::string sid = block.sent_id.empty() ? "#" + std::to_string(ordinal) : block.sent_id;
    try {
      std::vector<std::string> warnings;
      SemGraph g = parse(block.body, &warnings);
      for (auto& w : warnings) result.report.warnings.push_back({sid, w});
      for (auto& [k, v] : block.header) {
        if (k == "id") continue;
        g.meta().set(k == "snt" ? "text" : k, v);
      }
      g.meta().set("sent_id", sid);
      result.corpus.add(std::move(g));
    } catch (const ParseError& err) {
      SourcePosition p = err.position();
      p.line += block.body_line - 1;
      result.report.skipped.push_back({sid, std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + err.message()});
    } catch (const CorpusError& err) {
      result.report.skipped.push_back({sid, err.what()});
    }
  }
  return result;
}

CorpusLoad load_corpus(const fs::path& path, std::string corpus_id, std::string_view language) {
  if (fs::is_regular_file(path)) return parse_archive(read_file(path), std::move(corpus_id));

  CorpusLoad result{Corpus(std::move(corpus_id)), {}};
  if (!fs::is_directory(path)) throw std::runtime_error("no such SBN file or directory: " + path.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".sbn") continue;
    std::string fname = entry.path().filename().string();
    if (!language.empty() && fname.rfind(std::string(language) + ".", 0) != 0) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    fs::path rel = fs::relative(file.parent_path(), path);
    std::string sid = rel.generic_string();
    if (sid.empty() || sid == ".") sid = file.stem().string();
    // pXX/dYYYY from deeper layouts such as en/gold/p00/d0004
    auto parts = std::vector<std::string>(rel.begin(), rel.end());
    if (parts.size() >= 2) sid = parts[parts.size() - 2] + "/" + parts.back();

    try {
      std::vector<std::string> warnings;
      SemGraph g = parse(read_file(file), &warnings);
      for (auto& w : warnings) result.report.warnings.push_back({sid, w});
      std::string fname = file.filename().string();
      fs::path raw = file.parent_path() / (fname.substr(0, fname.find('.')) + ".raw");
      if (fs::is_regular_file(raw)) g.meta().set("text", trim(read_file(raw)));
      g.meta().set("sent_id", sid);
      result.corpus.add(std::move(g));
    } catch (const ParseError& err) {
      result.report.skipped.push_back({sid, err.what()});
    } catch (const CorpusError& err) {
      result.report.skipped.push_back({sid, err.what()});
    }
  }
  return result;
}

}  // namespace semgraph::sbn
