#include "levysg/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace levysg {

namespace {

std::string type_name(const Value& v) {
  switch (v.v.index()) {
    case 0: return "empty";
    case 1: return "bool";
    case 2: return "number";
    case 3: return "string";
    case 4: return "array";
    default: return "table";
  }
}

[[noreturn]] void type_error(const std::string& key, const char* want, const Value& v) {
  throw ConfigError(key, std::string("expected ") + want + ", found " + type_name(v));
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Table document() {
    Table root;
    Table* current = &root;
    while (true) {
      skip_ws_and_comments(true);
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        skip_inline_ws();
        auto path = key_path();
        skip_inline_ws();
        expect(']');
        current = &root;
        std::string dotted;
        for (const auto& k : path) {
          current = &current->subtable(k);
          dotted += (dotted.empty() ? "" : ".") + k;
          current->prefix = dotted;
        }
      } else {
        auto path = key_path();
        skip_inline_ws();
        expect('=');
        skip_inline_ws();
        Value v = value();
        assign(*current, path, std::move(v));
      }
      skip_inline_ws();
      if (!eof() && peek() == '#') skip_comment();
      if (!eof() && peek() != '\n' && peek() != '\r') fail("unexpected trailing characters");
    }
    return root;
  }

  Value single_value() {
    skip_inline_ws();
    Value v = value();
    skip_inline_ws();
    if (!eof()) fail("unexpected trailing characters");
    return v;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i)
      if (s_[i] == '\n') ++line;
    throw ConfigError("", "parse error at line " + std::to_string(line) + ": " + msg);
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }
  void skip_comment() {
    while (!eof() && peek() != '\n') ++pos_;
  }
  void skip_ws_and_comments(bool newlines) {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || (newlines && (c == '\n' || c == '\r'))) {
        ++pos_;
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  std::string bare_key() {
    std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                      peek() == '-'))
      ++pos_;
    if (start == pos_) {
      if (!eof() && peek() == '"') return string_lit();
      fail("expected key");
    }
    return s_.substr(start, pos_ - start);
  }

  std::vector<std::string> key_path() {
    std::vector<std::string> out{bare_key()};
    skip_inline_ws();
    while (!eof() && peek() == '.') {
      ++pos_;
      skip_inline_ws();
      out.push_back(bare_key());
      skip_inline_ws();
    }
    return out;
  }

  void assign(Table& t, const std::vector<std::string>& path, Value v) {
    Table* cur = &t;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) cur = &cur->subtable(path[i]);
    if (cur->has(path.back())) fail("duplicate key '" + path.back() + "'");
    if (v.is_table()) {
      auto& tab = *std::get<std::shared_ptr<Table>>(v.v);
      tab.prefix = (cur->prefix.empty() ? "" : cur->prefix + ".") + path.back();
    }
    cur->set(path.back(), std::move(v));
  }

  std::string string_lit() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("bad escape");
        char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("unsupported escape");
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  Value value() {
    if (eof()) fail("expected value");
    char c = peek();
    Value v;
    if (c == '"') {
      v.v = string_lit();
    } else if (c == '[') {
      ++pos_;
      Array arr;
      skip_ws_and_comments(true);
      while (!eof() && peek() != ']') {
        arr.push_back(value());
        skip_ws_and_comments(true);
        if (!eof() && peek() == ',') {
          ++pos_;
          skip_ws_and_comments(true);
        } else {
          break;
        }
      }
      expect(']');
      v.v = std::move(arr);
    } else if (c == '{') {
      ++pos_;
      auto tab = std::make_shared<Table>();
      skip_inline_ws();
      while (!eof() && peek() != '}') {
        auto path = key_path();
        skip_inline_ws();
        expect('=');
        skip_inline_ws();
        assign(*tab, path, value());
        skip_inline_ws();
        if (!eof() && peek() == ',') {
          ++pos_;
          skip_inline_ws();
        } else {
          break;
        }
      }
      expect('}');
      v.v = std::move(tab);
    } else if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      v.v = true;
    } else if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      v.v = false;
    } else {
      std::size_t start = pos_;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' ||
                        peek() == '+' || peek() == '-' || peek() == '_'))
        ++pos_;
      std::string tok = s_.substr(start, pos_ - start);
      std::string clean;
      for (char ch : tok)
        if (ch != '_') clean += ch;
      if (clean == "inf" || clean == "+inf") {
        v.v = HUGE_VAL;
      } else if (clean == "-inf") {
        v.v = -HUGE_VAL;
      } else {
        char* end = nullptr;
        double d = std::strtod(clean.c_str(), &end);
        if (clean.empty() || end != clean.c_str() + clean.size()) fail("bad value '" + tok + "'");
        v.v = d;
      }
    }
    return v;
  }
};

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void canonical_value(std::ostringstream& os, const Value& v);

void canonical_table(std::ostringstream& os, const Table& t) {
  os << '{';
  bool first = true;
  for (const auto& [k, v] : t.entries()) {
    if (!first) os << ',';
    first = false;
    os << k << '=';
    canonical_value(os, v);
  }
  os << '}';
}

void canonical_value(std::ostringstream& os, const Value& v) {
  if (v.is_bool()) {
    os << (std::get<bool>(v.v) ? "true" : "false");
  } else if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v.v));
    os << buf;
  } else if (v.is_string()) {
    os << '"' << std::get<std::string>(v.v) << '"';
  } else if (v.is_array()) {
    os << '[';
    const auto& a = std::get<Array>(v.v);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) os << ',';
      canonical_value(os, a[i]);
    }
    os << ']';
  } else if (v.is_table()) {
    canonical_table(os, *std::get<std::shared_ptr<Table>>(v.v));
  }
}

}  // namespace

bool Value::as_bool(const std::string& key) const {
  if (!is_bool()) type_error(key, "bool", *this);
  return std::get<bool>(v);
}
double Value::as_number(const std::string& key) const {
  if (!is_number()) type_error(key, "number", *this);
  return std::get<double>(v);
}
const std::string& Value::as_string(const std::string& key) const {
  if (!is_string()) type_error(key, "string", *this);
  return std::get<std::string>(v);
}
const Array& Value::as_array(const std::string& key) const {
  if (!is_array()) type_error(key, "array", *this);
  return std::get<Array>(v);
}
const Table& Value::as_table(const std::string& key) const {
  if (!is_table()) type_error(key, "table", *this);
  return *std::get<std::shared_ptr<Table>>(v);
}

const Value& Table::at(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(join(prefix, key), "missing required key");
  return it->second;
}

Table& Table::subtable(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    Value v;
    auto t = std::make_shared<Table>();
    t->prefix = join(prefix, key);
    v.v = t;
    it = entries_.emplace(key, std::move(v)).first;
  }
  if (!it->second.is_table()) throw ConfigError(join(prefix, key), "not a table");
  return *std::get<std::shared_ptr<Table>>(it->second.v);
}

double Table::number(const std::string& key, double fallback) const {
  return has(key) ? at(key).as_number(join(prefix, key)) : fallback;
}
double Table::number(const std::string& key) const { return at(key).as_number(join(prefix, key)); }

int Table::integer(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  double d = at(key).as_number(join(prefix, key));
  if (d != std::floor(d) || std::abs(d) > 2e9)
    throw ConfigError(join(prefix, key), "expected an integer");
  return static_cast<int>(d);
}

bool Table::boolean(const std::string& key, bool fallback) const {
  return has(key) ? at(key).as_bool(join(prefix, key)) : fallback;
}

std::string Table::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).as_string(join(prefix, key)) : fallback;
}
std::string Table::string(const std::string& key) const {
  return at(key).as_string(join(prefix, key));
}

std::vector<double> Table::numbers(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& v : at(key).as_array(join(prefix, key)))
    out.push_back(v.as_number(join(prefix, key)));
  return out;
}

const Table* Table::table(const std::string& key) const {
  if (!has(key)) return nullptr;
  return &at(key).as_table(join(prefix, key));
}

Table parse_config(const std::string& text) { return Parser(text).document(); }

Table parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  if (blank) throw ConfigError("config", "empty configuration file '" + path + "'");
  return parse_config(text);
}

Value parse_value_text(const std::string& text) { return Parser(text).single_value(); }

void apply_override(Table& root, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override", "expected key=value, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq);
  std::string val = assignment.substr(eq + 1);
  Value v;
  try {
    v = parse_value_text(val);
  } catch (const ConfigError&) {
    v.v = val;  // bare word: keep as string
  }
  Table* cur = &root;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    if (dot == std::string::npos) break;
    cur = &cur->subtable(key.substr(start, dot - start));
    start = dot + 1;
  }
  cur->set(key.substr(start), std::move(v));
}

std::string canonical_text(const Table& t) {
  std::ostringstream os;
  canonical_table(os, t);
  return os.str();
}

}  // namespace levysg
