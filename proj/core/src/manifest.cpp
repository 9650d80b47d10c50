// Copyright 2026 The CAMINO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "camino/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "camino/errors.hpp"

namespace camino::manifest {
namespace {

[[noreturn]] void dialect_error(std::size_t line, std::size_t column, const std::string& what) {
  throw CaminoError(Errc::DialectError,
                    "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

bool is_valid_key(std::string_view key) {
  if (key.empty()) return false;
  if (!(std::isalnum(static_cast<unsigned char>(key[0])) || key[0] == '_')) return false;
  return std::all_of(key.begin(), key.end(), is_key_char);
}

bool parse_integer(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  std::size_t i = text[0] == '-' ? 1 : 0;
  if (i == text.size()) return false;
  std::int64_t value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    value = value * 10 + (text[i] - '0');
  }
  out = text[0] == '-' ? -value : value;
  return true;
}

struct Line {
  std::size_t indent{0};
  std::string content;     // comment stripped, trailing whitespace trimmed
  std::string annotation;  // parameter from a "# set: <param>" comment
  std::size_t number{0};   // 1-based source line
};

// Splits the raw text into logical lines: strips quote-aware comments,
// extracts annotations, and drops blanks and comment-only lines.
std::vector<Line> scan(std::string_view text) {
  std::vector<Line> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++lineno;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    std::size_t indent = 0;
    while (indent < raw.size() && raw[indent] == ' ') ++indent;
    if (indent < raw.size() && raw[indent] == '\t') {
      dialect_error(lineno, indent + 1, "tab indentation is not allowed");
    }
    std::string_view body = raw.substr(indent);
    if (body.empty()) continue;

    // Quote-aware scan for the comment start: a '#' at the start of the
    // body or preceded by whitespace.
    std::string content;
    std::string comment;
    bool in_quotes = false;
    bool escaped = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      const char c = body[i];
      if (c == '\t' && !in_quotes) dialect_error(lineno, indent + i + 1, "tab character is not allowed");
      if (in_quotes) {
        content += c;
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_quotes = false;
        continue;
      }
      if (c == '"') {
        in_quotes = true;
        content += c;
        continue;
      }
      if (c == '#' && (i == 0 || body[i - 1] == ' ')) {
        comment = std::string(body.substr(i + 1));
        break;
      }
      content += c;
    }
    if (in_quotes) dialect_error(lineno, indent + body.size(), "unterminated string");
    while (!content.empty() && content.back() == ' ') content.pop_back();

    Line line;
    line.indent = indent;
    line.number = lineno;
    line.content = std::move(content);

    // "# set: <param>" annotations; every other comment is ignored.
    std::string_view c = comment;
    while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
    if (c.rfind("set:", 0) == 0) {
      c.remove_prefix(4);
      while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
      while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
      if (!is_valid_key(c)) dialect_error(lineno, indent + 1, "bad setter annotation");
      line.annotation = std::string(c);
    }

    if (line.content.empty() && line.annotation.empty()) continue;  // comment-only line
    if (line.content.empty()) dialect_error(lineno, indent + 1, "annotation without a value");
    out.push_back(std::move(line));
  }
  return out;
}

ScalarValue parse_scalar_token(std::string_view token, std::size_t lineno, std::size_t column) {
  if (token.size() >= 2 && token.front() == '"') {
    if (token.back() != '"' || token.size() < 2) dialect_error(lineno, column, "unterminated string");
    std::string value;
    for (std::size_t i = 1; i + 1 < token.size(); ++i) {
      char c = token[i];
      if (c == '\\') {
        if (i + 2 >= token.size()) dialect_error(lineno, column + i, "dangling escape");
        const char esc = token[++i];
        if (esc == 'n') c = '\n';
        else if (esc == 't') c = '\t';
        else if (esc == '"') c = '"';
        else if (esc == '\\') c = '\\';
        else dialect_error(lineno, column + i, "unknown escape sequence");
      } else if (c == '"') {
        dialect_error(lineno, column + i, "unescaped quote inside string");
      }
      value += c;
    }
    return value;
  }
  if (token == "true") return true;
  if (token == "false") return false;
  std::int64_t integer = 0;
  if (parse_integer(token, integer)) return integer;
  if (token.find('"') != std::string_view::npos) dialect_error(lineno, column, "misplaced quote");
  return std::string(token);
}

// Matches "key:" at the start of `content`; value starts after ": " (or the
// line ends right after the colon). Bare scalars like "http://x" do not match.
bool split_key(std::string_view content, std::string_view& key, std::string_view& rest) {
  std::size_t i = 0;
  while (i < content.size() && is_key_char(content[i])) ++i;
  if (i == 0 || i >= content.size() || content[i] != ':') return false;
  if (i + 1 < content.size() && content[i + 1] != ' ') return false;
  key = content.substr(0, i);
  rest = i + 1 < content.size() ? content.substr(i + 2) : std::string_view{};
  return true;
}

class Parser {
 public:
  explicit Parser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  Document run() {
    if (lines_.empty()) throw CaminoError(Errc::DialectError, "empty document");
    if (lines_[0].indent != 0) dialect_error(lines_[0].number, 1, "root must start at column 1");
    if (is_list_item(lines_[0])) dialect_error(lines_[0].number, 1, "root must be a map");
    Document doc = parse_map(0);
    if (cursor_ < lines_.size()) {
      dialect_error(lines_[cursor_].number, lines_[cursor_].indent + 1, "bad indentation");
    }
    return doc;
  }

 private:
  static bool is_list_item(const Line& line) {
    return line.content == "-" || line.content.rfind("- ", 0) == 0;
  }

  const Line* peek() const { return cursor_ < lines_.size() ? &lines_[cursor_] : nullptr; }

  Node parse_map(std::size_t indent) {
    Node::Map entries;
    std::set<std::string> seen;
    while (const Line* line = peek()) {
      if (line->indent < indent) break;
      if (line->indent > indent) dialect_error(line->number, line->indent + 1, "bad indentation");
      if (is_list_item(*line)) dialect_error(line->number, indent + 1, "unexpected list item in map");
      std::string_view key, rest;
      if (!split_key(line->content, key, rest)) {
        dialect_error(line->number, indent + 1, "expected 'key: value'");
      }
      if (!is_valid_key(key)) dialect_error(line->number, indent + 1, "bad key");
      if (!seen.insert(std::string(key)).second) {
        throw CaminoError(Errc::DuplicateKey, "line " + std::to_string(line->number) +
                                                  ": duplicate key '" + std::string(key) + "'");
      }
      const Line current = *line;
      ++cursor_;
      entries.emplace_back(std::string(key), parse_value(current, rest, indent));
    }
    return Node(std::move(entries));
  }

  Node parse_list(std::size_t indent) {
    Node::List items;
    while (const Line* line = peek()) {
      if (line->indent != indent || !is_list_item(*line)) break;
      if (line->content == "-") dialect_error(line->number, indent + 1, "empty list item");
      const Line current = *line;
      ++cursor_;
      std::string_view body = std::string_view(current.content).substr(2);
      std::string_view key, rest;
      if (split_key(body, key, rest)) {
        // Inline map start: the first entry sits on the dash line, the rest
        // of the item's keys continue two columns in.
        if (!is_valid_key(key)) dialect_error(current.number, indent + 3, "bad key");
        Node::Map entries;
        entries.emplace_back(std::string(key), parse_value(current, rest, indent + 2));
        Node tail = parse_map_continuation(indent + 2, entries, current.number);
        items.push_back(std::move(tail));
      } else {
        if (body.rfind("- ", 0) == 0) dialect_error(current.number, indent + 3, "nested list items are not supported");
        Node item = Node::scalar(parse_scalar_token(body, current.number, indent + 3), current.annotation);
        items.push_back(std::move(item));
      }
    }
    return Node(std::move(items));
  }

  // Continues a list item's map after its inline first entry.
  Node parse_map_continuation(std::size_t indent, Node::Map& entries, std::size_t start_line) {
    std::set<std::string> seen;
    for (const auto& [k, v] : entries) seen.insert(k);
    while (const Line* line = peek()) {
      if (line->indent != indent || is_list_item(*line)) break;
      std::string_view key, rest;
      if (!split_key(line->content, key, rest)) {
        dialect_error(line->number, indent + 1, "expected 'key: value'");
      }
      if (!is_valid_key(key)) dialect_error(line->number, indent + 1, "bad key");
      if (!seen.insert(std::string(key)).second) {
        throw CaminoError(Errc::DuplicateKey, "line " + std::to_string(line->number) +
                                                  ": duplicate key '" + std::string(key) + "'");
      }
      const Line current = *line;
      ++cursor_;
      entries.emplace_back(std::string(key), parse_value(current, rest, indent));
    }
    (void)start_line;
    return Node(std::move(entries));
  }

  // Parses the value part of a "key:" line: inline scalar or nested block.
  Node parse_value(const Line& line, std::string_view rest, std::size_t indent) {
    if (!rest.empty()) {
      return Node::scalar(parse_scalar_token(rest, line.number, indent + 1), line.annotation);
    }
    if (!line.annotation.empty()) {
      dialect_error(line.number, indent + 1, "annotation on a non-scalar value");
    }
    const Line* next = peek();
    if (next == nullptr || next->indent < indent + 2) {
      dialect_error(line.number, indent + 1, "missing value");
    }
    if (next->indent > indent + 2) dialect_error(next->number, next->indent + 1, "bad indentation");
    return is_list_item(*next) ? parse_list(indent + 2) : parse_map(indent + 2);
  }

  std::vector<Line> lines_;
  std::size_t cursor_{0};
};

bool is_bare_safe(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == ' ' || s.back() == ' ') return false;
  if (s == "true" || s == "false" || s == "-") return false;
  std::int64_t ignored = 0;
  if (parse_integer(s, ignored)) return false;
  if (s.rfind("- ", 0) == 0) return false;
  if (s.find(": ") != std::string::npos || s.back() == ':') return false;
  for (const char c : s) {
    if (c == '#' || c == '"' || c == '\n' || c == '\t' || c == '\\') return false;
  }
  // Must not reparse as a "key:" line.
  std::string_view key, rest;
  if (split_key(s, key, rest) && rest.empty()) return false;
  return true;
}

std::string render_scalar(const ScalarValue& value) {
  if (std::holds_alternative<std::int64_t>(value)) return std::to_string(std::get<std::int64_t>(value));
  if (std::holds_alternative<bool>(value)) return std::get<bool>(value) ? "true" : "false";
  const std::string& s = std::get<std::string>(value);
  if (is_bare_safe(s)) return s;
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void render_node(const Node& node, std::string& out, std::size_t indent, bool sorted);

void render_entry(const std::string& key, const Node& value, std::string& out, std::size_t indent,
                  bool sorted) {
  if (!is_valid_key(key)) throw CaminoError(Errc::DialectError, "unserializable key '" + key + "'");
  out.append(indent, ' ');
  out += key;
  out += ':';
  if (value.is_scalar()) {
    out += ' ';
    out += render_scalar(value.scalar());
    if (!value.setter().empty()) out += "  # set: " + value.setter();
    out += '\n';
  } else {
    out += '\n';
    render_node(value, out, indent + 2, sorted);
  }
}

void render_node(const Node& node, std::string& out, std::size_t indent, bool sorted) {
  if (node.is_map()) {
    if (node.map().empty()) throw CaminoError(Errc::DialectError, "empty map is not serializable");
    if (sorted) {
      std::vector<const std::pair<std::string, Node>*> entries;
      entries.reserve(node.map().size());
      for (const auto& e : node.map()) entries.push_back(&e);
      std::sort(entries.begin(), entries.end(),
                [](const auto* a, const auto* b) { return a->first < b->first; });
      for (const auto* e : entries) render_entry(e->first, e->second, out, indent, sorted);
    } else {
      for (const auto& [key, value] : node.map()) render_entry(key, value, out, indent, sorted);
    }
    return;
  }
  if (node.is_list()) {
    if (node.list().empty()) throw CaminoError(Errc::DialectError, "empty list is not serializable");
    for (const Node& item : node.list()) {
      if (item.is_scalar()) {
        out.append(indent, ' ');
        out += "- ";
        out += render_scalar(item.scalar());
        if (!item.setter().empty()) out += "  # set: " + item.setter();
        out += '\n';
      } else if (item.is_map()) {
        // First entry inline on the dash line, remaining keys two columns in.
        if (item.map().empty()) throw CaminoError(Errc::DialectError, "empty map is not serializable");
        std::vector<const std::pair<std::string, Node>*> entries;
        entries.reserve(item.map().size());
        for (const auto& e : item.map()) entries.push_back(&e);
        if (sorted) {
          std::sort(entries.begin(), entries.end(),
                    [](const auto* a, const auto* b) { return a->first < b->first; });
        }
        bool first = true;
        for (const auto* e : entries) {
          if (first) {
            out.append(indent, ' ');
            out += "- ";
            const auto& [key, value] = *e;
            if (!is_valid_key(key)) throw CaminoError(Errc::DialectError, "unserializable key '" + key + "'");
            out += key;
            out += ':';
            if (value.is_scalar()) {
              out += ' ';
              out += render_scalar(value.scalar());
              if (!value.setter().empty()) out += "  # set: " + value.setter();
              out += '\n';
            } else {
              out += '\n';
              render_node(value, out, indent + 4, sorted);
            }
            first = false;
          } else {
            render_entry(e->first, e->second, out, indent + 2, sorted);
          }
        }
      } else {
        throw CaminoError(Errc::DialectError, "nested list items are not serializable");
      }
    }
    return;
  }
  throw CaminoError(Errc::DialectError, "scalar cannot be a block");
}

void walk_setters(const Node& node, const std::string& path, std::size_t doc_index,
                  std::map<std::string, std::vector<SetterTarget>>& out) {
  if (node.is_scalar()) {
    if (!node.setter().empty()) out[node.setter()].push_back({doc_index, path});
    return;
  }
  if (node.is_map()) {
    for (const auto& [key, value] : node.map()) {
      walk_setters(value, path.empty() ? key : path + "." + key, doc_index, out);
    }
    return;
  }
  for (std::size_t i = 0; i < node.list().size(); ++i) {
    const std::string element = std::to_string(i);
    walk_setters(node.list()[i], path.empty() ? element : path + "." + element, doc_index, out);
  }
}

}  // namespace

std::string scalar_to_string(const ScalarValue& value) {
  if (std::holds_alternative<std::int64_t>(value)) return std::to_string(std::get<std::int64_t>(value));
  if (std::holds_alternative<bool>(value)) return std::get<bool>(value) ? "true" : "false";
  return std::get<std::string>(value);
}

const Node* Node::find(std::string_view key) const {
  if (!is_map()) return nullptr;
  for (const auto& [k, v] : map()) {
    if (k == key) return &v;
  }
  return nullptr;
}

Node* Node::find(std::string_view key) {
  if (!is_map()) return nullptr;
  for (auto& [k, v] : map()) {
    if (k == key) return &v;
  }
  return nullptr;
}

Document parse(std::string_view text) {
  return Parser(scan(text)).run();
}

std::string serialize(const Document& doc) {
  if (!doc.is_map()) throw CaminoError(Errc::DialectError, "root must be a map");
  std::string out;
  render_node(doc, out, 0, /*sorted=*/false);
  return out;
}

std::string canonical(const Document& doc) {
  if (!doc.is_map()) throw CaminoError(Errc::DialectError, "root must be a map");
  std::string out;
  render_node(doc, out, 0, /*sorted=*/true);
  return out;
}

const Node* find_path(const Document& doc, std::string_view path) {
  const Node* node = &doc;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::string_view segment =
        path.substr(start, dot == std::string_view::npos ? path.size() - start : dot - start);
    if (segment.empty()) return nullptr;
    if (node->is_map()) {
      node = node->find(segment);
      if (node == nullptr) return nullptr;
    } else if (node->is_list()) {
      std::int64_t index = 0;
      if (!parse_integer(segment, index) || index < 0 ||
          static_cast<std::size_t>(index) >= node->list().size()) {
        return nullptr;
      }
      node = &node->list()[static_cast<std::size_t>(index)];
    } else {
      return nullptr;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return node;
}

std::map<std::string, std::vector<SetterTarget>> collect_setters(const std::vector<Document>& docs) {
  std::map<std::string, std::vector<SetterTarget>> out;
  for (std::size_t i = 0; i < docs.size(); ++i) walk_setters(docs[i], "", i, out);
  return out;
}

namespace {

Node bind_node(const Node& node, const std::map<std::string, ScalarValue>& bindings,
               std::set<std::string>& resolved, std::set<std::string>& unresolved) {
  if (node.is_scalar()) {
    if (node.setter().empty()) return node;
    const auto it = bindings.find(node.setter());
    if (it == bindings.end()) {
      unresolved.insert(node.setter());
      return node;
    }
    resolved.insert(node.setter());
    return Node::scalar(it->second);
  }
  if (node.is_map()) {
    Node::Map out;
    out.reserve(node.map().size());
    for (const auto& [key, value] : node.map()) {
      out.emplace_back(key, bind_node(value, bindings, resolved, unresolved));
    }
    return Node(std::move(out));
  }
  Node::List out;
  out.reserve(node.list().size());
  for (const Node& item : node.list()) {
    out.push_back(bind_node(item, bindings, resolved, unresolved));
  }
  return Node(std::move(out));
}

}  // namespace

Document bind(const Document& doc, const std::map<std::string, ScalarValue>& bindings,
              std::set<std::string>& resolved, std::set<std::string>& unresolved) {
  return bind_node(doc, bindings, resolved, unresolved);
}

}  // namespace camino::manifest
