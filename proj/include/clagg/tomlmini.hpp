#pragma once

// Minimal TOML subset, enough for the experiment configs: comments,
// [tables], [[arrays of tables]], bare keys, strings, ints, floats, bools
// and single-line (possibly nested) arrays. Nothing else is accepted.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace clagg::toml {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, std::int64_t, double, bool, Array> v;

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }

  const std::string& as_string() const {
    if (!is_string()) throw ParseError("expected string value");
    return std::get<std::string>(v);
  }
  std::int64_t as_int() const {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw ParseError("expected integer value");
  }
  double as_double() const {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ParseError("expected numeric value");
  }
  bool as_bool() const {
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw ParseError("expected boolean value");
  }
  const Array& as_array() const {
    if (!is_array()) throw ParseError("expected array value");
    return std::get<Array>(v);
  }
};

struct Table {
  std::map<std::string, Value> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  const Value& at(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing key: " + key);
    return it->second;
  }
  std::string get_string(const std::string& key, const std::string& dflt) const {
    return has(key) ? at(key).as_string() : dflt;
  }
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const {
    return has(key) ? at(key).as_int() : dflt;
  }
  double get_double(const std::string& key, double dflt) const {
    return has(key) ? at(key).as_double() : dflt;
  }
  bool get_bool(const std::string& key, bool dflt) const {
    return has(key) ? at(key).as_bool() : dflt;
  }
};

struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;

  const Table& table(const std::string& name) const {
    static const Table empty;
    auto it = tables.find(name);
    return it == tables.end() ? empty : it->second;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
    if (c == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

inline Value parse_value(const std::string& raw, int line_no);

inline Array parse_array(const std::string& body, int line_no) {
  Array out;
  int depth = 0;
  bool in_str = false;
  std::string current;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (c == '"' && (i == 0 || body[i - 1] != '\\')) in_str = !in_str;
    if (!in_str) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == ',' && depth == 0) {
        const std::string tok = trim(current);
        if (!tok.empty()) out.push_back(parse_value(tok, line_no));
        current.clear();
        continue;
      }
    }
    current += c;
  }
  const std::string tok = trim(current);
  if (!tok.empty()) out.push_back(parse_value(tok, line_no));
  return out;
}

inline Value parse_value(const std::string& raw, int line_no) {
  const std::string s = trim(raw);
  if (s.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw ParseError("line " + std::to_string(line_no) + ": unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        ++i;
        switch (s[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            throw ParseError("line " + std::to_string(line_no) + ": bad escape");
        }
      } else {
        out += s[i];
      }
    }
    return Value{out};
  }
  if (s.front() == '[') {
    if (s.back() != ']')
      throw ParseError("line " + std::to_string(line_no) + ": unterminated array");
    return Value{parse_array(s.substr(1, s.size() - 2), line_no)};
  }
  if (s == "true") return Value{true};
  if (s == "false") return Value{false};
  const bool looks_float = s.find_first_of(".eE") != std::string::npos ||
                           s == "inf" || s == "-inf" || s == "nan";
  try {
    std::size_t pos = 0;
    if (!looks_float) {
      const std::int64_t i = std::stoll(s, &pos);
      if (pos == s.size()) return Value{i};
    }
    pos = 0;
    const double d = std::stod(s, &pos);
    if (pos == s.size()) return Value{d};
  } catch (const std::exception&) {
  }
  throw ParseError("line " + std::to_string(line_no) + ": cannot parse value '" + s + "'");
}

}  // namespace detail

inline Document parse(const std::string& text) {
  Document doc;
  Table* current = &doc.root;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(detail::strip_comment(line));
    if (t.empty()) continue;
    if (t.size() >= 4 && t.substr(0, 2) == "[[" && t.substr(t.size() - 2) == "]]") {
      const std::string name = detail::trim(t.substr(2, t.size() - 4));
      if (name.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty table name");
      doc.table_arrays[name].emplace_back();
      current = &doc.table_arrays[name].back();
      continue;
    }
    if (t.front() == '[' && t.back() == ']') {
      const std::string name = detail::trim(t.substr(1, t.size() - 2));
      if (name.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty table name");
      current = &doc.tables[name];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    current->kv[key] = detail::parse_value(t.substr(eq + 1), line_no);
  }
  return doc;
}

inline Document parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace clagg::toml
