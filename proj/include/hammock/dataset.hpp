#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hammock/error.hpp"

namespace hammock {

// ---------------------------------------------------------------------------
// CellValue
// ---------------------------------------------------------------------------

struct Missing {
  friend bool operator==(Missing, Missing) { return true; }
};

// One table cell: a finite number, an integer category code, or Missing.
class CellValue {
 public:
  CellValue() = default;

  static CellValue number(double v) {
    CellValue c;
    if (std::isfinite(v)) c.v_ = v;
    return c;
  }
  static CellValue code(std::int64_t c) {
    CellValue out;
    out.v_ = c;
    return out;
  }
  static CellValue missing() { return {}; }

  bool is_missing() const { return std::holds_alternative<Missing>(v_); }
  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_code() const { return std::holds_alternative<std::int64_t>(v_); }

  double as_number() const { return std::get<double>(v_); }
  std::int64_t as_code() const { return std::get<std::int64_t>(v_); }

  // Number or code widened to double; Missing is not allowed.
  double numeric() const {
    return is_code() ? static_cast<double>(as_code()) : as_number();
  }

  friend bool operator==(const CellValue& a, const CellValue& b) {
    return a.v_ == b.v_;
  }
  // Missing sorts first, then numbers, then codes.
  friend bool operator<(const CellValue& a, const CellValue& b) {
    if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
    if (a.is_number()) return a.as_number() < b.as_number();
    if (a.is_code()) return a.as_code() < b.as_code();
    return false;
  }

 private:
  std::variant<Missing, double, std::int64_t> v_;
};

// Shortest round-trip text for a cell ("." for Missing).
inline std::string to_string(const CellValue& c) {
  if (c.is_missing()) return ".";
  char buf[64];
  auto res = c.is_code() ? std::to_chars(buf, buf + sizeof buf, c.as_code())
                         : std::to_chars(buf, buf + sizeof buf, c.as_number());
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Column / Dataset
// ---------------------------------------------------------------------------

enum class ColumnKind { numeric, categorical };

inline const char* to_string(ColumnKind k) {
  return k == ColumnKind::numeric ? "numeric" : "categorical";
}

struct Column {
  std::string name;
  std::string label;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<CellValue> cells;
  std::map<std::int64_t, std::string> value_labels;

  std::size_t size() const { return cells.size(); }

  std::size_t missing_count() const {
    return static_cast<std::size_t>(std::count_if(
        cells.begin(), cells.end(), [](const CellValue& c) { return c.is_missing(); }));
  }

  // Label for a category code; unlabeled codes render as their integer text.
  std::string code_label(std::int64_t code) const {
    auto it = value_labels.find(code);
    return it != value_labels.end() ? it->second : std::to_string(code);
  }

  // Sorted distinct non-missing cell values.
  std::vector<CellValue> distinct_values() const {
    std::set<CellValue> seen;
    for (const auto& c : cells)
      if (!c.is_missing()) seen.insert(c);
    return {seen.begin(), seen.end()};
  }

  friend bool operator==(const Column&, const Column&) = default;
};

class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<Column> columns) {
    for (auto& c : columns) add_column(std::move(c));
  }

  void add_column(Column col) {
    if (col.label.empty()) col.label = col.name;
    if (find(col.name)) throw data_error("dataset", "duplicate column name '" + col.name + "'");
    if (!columns_.empty() && col.size() != n_rows_)
      throw data_error("dataset", "column '" + col.name + "' has " + std::to_string(col.size()) +
                                      " cells, expected " + std::to_string(n_rows_));
    for (const auto& c : col.cells) {
      bool ok = c.is_missing() || (col.kind == ColumnKind::numeric ? c.is_number() : c.is_code());
      if (!ok) throw data_error("dataset", "column '" + col.name + "' holds a cell of the wrong kind");
    }
    if (columns_.empty()) n_rows_ = col.size();
    columns_.push_back(std::move(col));
  }

  std::size_t n_rows() const { return n_rows_; }
  const std::vector<Column>& columns() const { return columns_; }

  const Column* find(std::string_view name) const {
    for (const auto& c : columns_)
      if (c.name == name) return &c;
    return nullptr;
  }
  Column* find(std::string_view name) {
    for (auto& c : columns_)
      if (c.name == name) return &c;
    return nullptr;
  }

  const Column& at(std::string_view name) const {
    if (const Column* c = find(name)) return *c;
    throw data_error("dataset", "no column named '" + std::string(name) + "'");
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

struct LoadOptions {
  std::map<std::string, ColumnKind> type_hints;
  std::set<std::string> missing_tokens{"", "."};
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses the whole token as a double; accepts "nan"/"inf" so the caller can map them to Missing.
inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// RFC-4180 record reader. Returns false at end of input.
inline bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  int ch = in.peek();
  if (ch == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  while (true) {
    ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) throw data_error("dataset", "unterminated quoted field at line " + std::to_string(line));
      break;
    }
    any = true;
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  ++line;
  fields.push_back(std::move(field));
  return any;
}

inline std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

// Reads a header + rows table. Columns whose non-missing tokens all parse as
// numbers become numeric; everything else is categorical. Categorical codes
// are the integer values when every token is an integer, otherwise they are
// assigned in first-appearance order and the tokens become value labels.
inline Dataset parse_csv(std::istream& in, const LoadOptions& opts = {}) {
  std::vector<std::string> header;
  std::size_t line = 1;
  if (!detail::read_record(in, header, line)) throw data_error("dataset", "empty CSV input (no header row)");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);
  {
    std::unordered_set<std::string> seen;
    for (auto& h : header) {
      h = std::string(detail::trim(h));
      if (!seen.insert(h).second) throw data_error("dataset", "duplicate header name '" + h + "'");
    }
  }
  for (const auto& [name, kind] : opts.type_hints) {
    if (std::find(header.begin(), header.end(), name) == header.end())
      throw data_error("dataset", "type hint names unknown column '" + name + "'");
  }

  std::vector<std::vector<std::string>> raw(header.size());
  std::vector<std::string> fields;
  while (true) {
    std::size_t row_line = line;
    if (!detail::read_record(in, fields, line)) break;
    if (fields.size() == 1 && detail::trim(fields[0]).empty() && header.size() > 1) continue;  // blank line
    if (fields.size() != header.size())
      throw data_error("dataset", "ragged row at line " + std::to_string(row_line) + ": " +
                                      std::to_string(fields.size()) + " fields, header has " +
                                      std::to_string(header.size()));
    for (std::size_t j = 0; j < fields.size(); ++j) raw[j].push_back(std::move(fields[j]));
  }

  Dataset ds;
  for (std::size_t j = 0; j < header.size(); ++j) {
    Column col;
    col.name = header[j];
    col.label = header[j];
    auto is_missing_token = [&](const std::string& t) {
      return opts.missing_tokens.count(std::string(detail::trim(t))) > 0;
    };

    bool all_numeric = true;
    bool all_integer = true;
    for (const auto& t : raw[j]) {
      if (is_missing_token(t)) continue;
      if (!detail::parse_double(t)) all_numeric = false;
      if (!detail::parse_int(t)) all_integer = false;
    }

    auto hint = opts.type_hints.find(col.name);
    col.kind = hint != opts.type_hints.end() ? hint->second
               : all_numeric                 ? ColumnKind::numeric
                                             : ColumnKind::categorical;
    col.cells.reserve(raw[j].size());

    if (col.kind == ColumnKind::numeric) {
      if (!all_numeric)
        throw data_error("dataset", "column '" + col.name + "' is hinted numeric but holds non-numeric tokens");
      for (const auto& t : raw[j])
        col.cells.push_back(is_missing_token(t) ? CellValue::missing()
                                                : CellValue::number(*detail::parse_double(t)));
    } else if (all_integer) {
      for (const auto& t : raw[j])
        col.cells.push_back(is_missing_token(t) ? CellValue::missing()
                                                : CellValue::code(*detail::parse_int(t)));
    } else {
      std::unordered_map<std::string, std::int64_t> codes;
      for (const auto& t : raw[j]) {
        if (is_missing_token(t)) {
          col.cells.push_back(CellValue::missing());
          continue;
        }
        std::string token(detail::trim(t));
        auto [it, inserted] = codes.emplace(token, static_cast<std::int64_t>(codes.size()));
        if (inserted) col.value_labels[it->second] = token;
        col.cells.push_back(CellValue::code(it->second));
      }
    }
    ds.add_column(std::move(col));
  }
  return ds;
}

inline Dataset load_csv(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("dataset", "cannot read '" + path + "'");
  return parse_csv(in, opts);
}

// Writes cells as tokens: labels for labeled categories, "." for Missing.
inline void write_csv(const Dataset& ds, std::ostream& out) {
  const auto& cols = ds.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << detail::quote_csv(cols[j].name);
  out << '\n';
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const CellValue& c = cols[j].cells[i];
      std::string token = c.is_code() && cols[j].value_labels.count(c.as_code())
                              ? cols[j].value_labels.at(c.as_code())
                              : to_string(c);
      out << (j ? "," : "") << detail::quote_csv(token);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Label maps
// ---------------------------------------------------------------------------

// Map format: {column: {"label": string, "values": {code: string}}}.
// Attaching value labels to a numeric column whose values are all integers
// turns it into a categorical column coded by those integers.
inline Dataset apply_label_map(Dataset ds, const nlohmann::json& map) {
  if (!map.is_object()) throw data_error("dataset", "label map must be a JSON object");
  std::vector<Column> cols = ds.columns();
  for (const auto& [name, entry] : map.items()) {
    auto it = std::find_if(cols.begin(), cols.end(), [&](const Column& c) { return c.name == name; });
    if (it == cols.end()) throw data_error("dataset", "label map names unknown column '" + name + "'");
    if (!entry.is_object()) throw data_error("dataset", "label map entry for '" + name + "' must be an object");
    Column& col = *it;
    if (entry.contains("label")) {
      if (!entry["label"].is_string()) throw data_error("dataset", "label for '" + name + "' must be a string");
      col.label = entry["label"].get<std::string>();
    }
    if (!entry.contains("values")) continue;
    const auto& values = entry["values"];
    if (!values.is_object()) throw data_error("dataset", "values for '" + name + "' must be an object");

    if (col.kind == ColumnKind::numeric) {
      for (auto& c : col.cells) {
        if (c.is_missing()) continue;
        double v = c.as_number();
        if (v != std::floor(v) || std::fabs(v) > 9.0e15)
          throw data_error("dataset", "cannot attach value labels to '" + name + "': non-integer value " +
                                          to_string(c));
        c = CellValue::code(static_cast<std::int64_t>(v));
      }
      col.kind = ColumnKind::categorical;
    }
    for (const auto& [key, text] : values.items()) {
      auto code = detail::parse_int(key);
      if (!code) throw data_error("dataset", "value label key '" + key + "' for '" + name + "' is not an integer");
      if (!text.is_string()) throw data_error("dataset", "value label for '" + name + "' must be a string");
      col.value_labels[*code] = text.get<std::string>();
    }
  }
  return Dataset(std::move(cols));
}

inline Dataset apply_label_map(Dataset ds, const std::string& map_path) {
  std::ifstream in(map_path);
  if (!in) throw data_error("dataset", "cannot read label map '" + map_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error("dataset", "malformed label map '" + map_path + "': " + e.what());
  }
  return apply_label_map(std::move(ds), j);
}

// ---------------------------------------------------------------------------
// Row predicates
// ---------------------------------------------------------------------------

struct RowPredicate {
  enum class Op { equals_code, equals_number, is_missing, greater, less, in_set, not_in_set };

  Op op = Op::is_missing;
  double number = 0;
  std::int64_t code = 0;
  std::vector<CellValue> members;  // in_set / not_in_set

  static RowPredicate equals_code(std::int64_t c) { return {Op::equals_code, 0, c, {}}; }
  static RowPredicate equals_number(double v) { return {Op::equals_number, v, 0, {}}; }
  static RowPredicate missing() { return {Op::is_missing, 0, 0, {}}; }
  static RowPredicate greater(double v) { return {Op::greater, v, 0, {}}; }
  static RowPredicate less(double v) { return {Op::less, v, 0, {}}; }
  static RowPredicate in_set(std::vector<CellValue> m) { return {Op::in_set, 0, 0, std::move(m)}; }
  static RowPredicate not_in_set(std::vector<CellValue> m) { return {Op::not_in_set, 0, 0, std::move(m)}; }

  std::string describe() const {
    switch (op) {
      case Op::equals_code: return "=" + std::to_string(code);
      case Op::equals_number: return "=" + to_string(CellValue::number(number));
      case Op::is_missing: return "missing";
      case Op::greater: return ">" + to_string(CellValue::number(number));
      case Op::less: return "<" + to_string(CellValue::number(number));
      case Op::in_set:
      case Op::not_in_set: {
        std::string s = op == Op::in_set ? "in {" : "not in {";
        for (std::size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + to_string(members[i]);
        return s + "}";
      }
    }
    return "?";
  }

  // Throws when the predicate cannot apply to a column of this kind.
  void check_kind(const Column& col) const {
    auto mismatch = [&] {
      return data_error("dataset", "predicate '" + describe() + "' does not apply to " + to_string(col.kind) +
                                       " column '" + col.name + "'");
    };
    switch (op) {
      case Op::equals_code:
        if (col.kind != ColumnKind::categorical) throw mismatch();
        break;
      case Op::equals_number:
      case Op::greater:
      case Op::less:
        if (col.kind != ColumnKind::numeric) throw mismatch();
        break;
      case Op::in_set:
      case Op::not_in_set:
        for (const auto& m : members)
          if (m.is_missing() || (col.kind == ColumnKind::numeric) != m.is_number()) throw mismatch();
        break;
      case Op::is_missing: break;
    }
  }

  bool matches(const CellValue& c) const {
    switch (op) {
      case Op::is_missing: return c.is_missing();
      case Op::equals_code: return c.is_code() && c.as_code() == code;
      case Op::equals_number: return c.is_number() && c.as_number() == number;
      case Op::greater: return c.is_number() && c.as_number() > number;
      case Op::less: return c.is_number() && c.as_number() < number;
      case Op::in_set: return std::find(members.begin(), members.end(), c) != members.end();
      case Op::not_in_set:
        return !c.is_missing() && std::find(members.begin(), members.end(), c) == members.end();
    }
    return false;
  }
};

inline std::vector<std::size_t> select_rows(const Column& col, const RowPredicate& pred) {
  pred.check_kind(col);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < col.cells.size(); ++i)
    if (pred.matches(col.cells[i])) rows.push_back(i);
  return rows;
}

inline std::vector<std::size_t> select_rows(const Dataset& ds, std::string_view column, const RowPredicate& pred) {
  return select_rows(ds.at(column), pred);
}

}  // namespace hammock
