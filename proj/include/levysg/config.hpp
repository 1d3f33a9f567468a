#pragma once

// Reader for a small TOML subset: [tables], [dotted.tables], key = value,
// strings, numbers, booleans, arrays and inline tables.  Comments start with #.

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "levysg/errors.hpp"

namespace levysg {

class Table;
struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::monostate, bool, double, std::string, Array, std::shared_ptr<Table>> v;

  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_number() const { return std::holds_alternative<double>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }
  bool is_table() const { return std::holds_alternative<std::shared_ptr<Table>>(v); }

  bool as_bool(const std::string& key) const;
  double as_number(const std::string& key) const;
  const std::string& as_string(const std::string& key) const;
  const Array& as_array(const std::string& key) const;
  const Table& as_table(const std::string& key) const;
};

class Table {
 public:
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const Value& at(const std::string& key) const;
  void set(const std::string& key, Value v) { entries_[key] = std::move(v); }
  Table& subtable(const std::string& key);  // creates if absent
  const std::map<std::string, Value>& entries() const { return entries_; }

  // Typed getters; `path` is the full dotted key used in error messages.
  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::string string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  const Table* table(const std::string& key) const;

  std::string prefix;  // dotted path of this table, for messages

 private:
  std::map<std::string, Value> entries_;
};

Table parse_config(const std::string& text);
Table parse_config_file(const std::string& path);
Value parse_value_text(const std::string& text);

/// Applies `a.b.c=value` to the table.
void apply_override(Table& root, const std::string& assignment);

/// Canonical serialization (sorted keys), used for hashing.
std::string canonical_text(const Table& t);

}  // namespace levysg
