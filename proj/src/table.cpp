/*
 * Copyright 2026 The tabqa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tabqa/table.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tabqa/text.h"

namespace tabqa {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read table file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses a run of digits at `s[i..]`; returns digit count.
std::size_t scan_digits(std::string_view s, std::size_t i) {
  std::size_t j = i;
  while (j < s.size() && is_digit(s[j])) ++j;
  return j - i;
}

int to_int(std::string_view digits) {
  int v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

bool valid_ymd(int y, int m, int d) {
  return y >= 1 && m >= 1 && m <= 12 && d >= 1 && d <= 31;
}

std::optional<int> month_from_name(std::string_view word) {
  static constexpr std::array<std::string_view, 12> kFull = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  std::string w = to_lower(word);
  if (!w.empty() && w.back() == '.') w.pop_back();
  for (std::size_t i = 0; i < kFull.size(); ++i) {
    if (w == kFull[i]) return static_cast<int>(i + 1);
    if (w.size() == 3 && kFull[i].substr(0, 3) == w) return static_cast<int>(i + 1);
  }
  if (w == "sept") return 9;
  return std::nullopt;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

// Day number with an optional ordinal suffix ("4", "4th", "21st,").
std::optional<int> parse_day(std::string_view w) {
  if (!w.empty() && w.back() == ',') w.remove_suffix(1);
  std::size_t n = scan_digits(w, 0);
  if (n == 0 || n > 2) return std::nullopt;
  std::string_view rest = w.substr(n);
  if (!rest.empty() && rest != "st" && rest != "nd" && rest != "rd" && rest != "th") {
    return std::nullopt;
  }
  int d = to_int(w.substr(0, n));
  if (d < 1 || d > 31) return std::nullopt;
  return d;
}

std::optional<int> parse_year4(std::string_view w) {
  if (w.size() != 4 || scan_digits(w, 0) != 4) return std::nullopt;
  return to_int(w);
}

bool has_format(const RecognizerConfig& c, DateFormat f) {
  return std::find(c.date_formats.begin(), c.date_formats.end(), f) != c.date_formats.end();
}

std::optional<DateValue> parse_date(std::string_view s, const RecognizerConfig& config) {
  // YYYY/MM/DD and YYYY-MM-DD
  if (s.size() >= 8 && s.size() <= 10 && scan_digits(s, 0) == 4 && (s[4] == '/' || s[4] == '-')) {
    char sep = s[4];
    bool wanted = sep == '/' ? has_format(config, DateFormat::kYmdSlash)
                             : has_format(config, DateFormat::kYmdDash);
    std::size_t mlen = scan_digits(s, 5);
    if (wanted && mlen >= 1 && mlen <= 2 && 5 + mlen < s.size() && s[5 + mlen] == sep) {
      std::size_t dstart = 5 + mlen + 1;
      std::size_t dlen = scan_digits(s, dstart);
      if (dlen >= 1 && dlen <= 2 && dstart + dlen == s.size()) {
        int y = to_int(s.substr(0, 4));
        int m = to_int(s.substr(5, mlen));
        int d = to_int(s.substr(dstart, dlen));
        if (valid_ymd(y, m, d)) return DateValue{y, m, d};
      }
    }
    return std::nullopt;
  }

  auto words = split_spaces(s);
  if (words.size() == 3) {
    // Month D, YYYY
    if (has_format(config, DateFormat::kMonthDayYear)) {
      auto m = month_from_name(words[0]);
      auto d = parse_day(words[1]);
      auto y = parse_year4(words[2]);
      if (m && d && y) return DateValue{*y, *m, *d};
    }
    // D Month YYYY
    if (has_format(config, DateFormat::kDayMonthYear)) {
      auto d = parse_day(words[0]);
      std::string_view mw = words[1];
      if (!mw.empty() && mw.back() == ',') mw.remove_suffix(1);
      auto m = month_from_name(mw);
      auto y = parse_year4(words[2]);
      if (m && d && y) return DateValue{*y, *m, *d};
    }
  }

  if (has_format(config, DateFormat::kYear)) {
    if (auto y = parse_year4(s); y && *y >= 1000 && *y <= 2999) {
      return DateValue{*y, std::nullopt, std::nullopt};
    }
  }
  return std::nullopt;
}

std::optional<TimeValue> parse_time(std::string_view s, const RecognizerConfig& config) {
  std::size_t hlen = scan_digits(s, 0);
  if (hlen < 1 || hlen > 2 || hlen >= s.size() || s[hlen] != ':') return std::nullopt;
  std::size_t mstart = hlen + 1;
  if (scan_digits(s, mstart) != 2) return std::nullopt;
  int h = to_int(s.substr(0, hlen));
  int m = to_int(s.substr(mstart, 2));
  if (m > 59) return std::nullopt;
  std::size_t after_m = mstart + 2;
  if (after_m == s.size()) {
    if (!config.times_hm) return std::nullopt;
    return TimeValue{static_cast<double>(h * 3600 + m * 60)};
  }
  if (!config.times_hms || s[after_m] != ':') return std::nullopt;
  std::size_t sstart = after_m + 1;
  if (scan_digits(s, sstart) != 2) return std::nullopt;
  int sec = to_int(s.substr(sstart, 2));
  if (sec > 59) return std::nullopt;
  double frac = 0.0;
  std::size_t end = sstart + 2;
  if (end < s.size()) {
    if (s[end] != '.') return std::nullopt;
    std::size_t flen = scan_digits(s, end + 1);
    if (flen == 0 || end + 1 + flen != s.size()) return std::nullopt;
    frac = std::strtod(std::string(s.substr(end)).c_str(), nullptr);
  }
  return TimeValue{h * 3600.0 + m * 60.0 + sec + frac};
}

bool starts_with_dash(std::string_view s, std::size_t i, std::size_t* len) {
  if (i < s.size() && s[i] == '-') {
    *len = 1;
    return true;
  }
  // en dash U+2013, em dash U+2014
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      (static_cast<unsigned char>(s[i + 2]) == 0x93 ||
       static_cast<unsigned char>(s[i + 2]) == 0x94)) {
    *len = 3;
    return true;
  }
  return false;
}

std::optional<ScoreValue> parse_score(std::string_view s) {
  std::size_t i = 0;
  std::optional<char> result;
  if (!s.empty() && (s[0] == 'W' || s[0] == 'L' || s[0] == 'T' || s[0] == 'D')) {
    result = s[0];
    i = 1;
    while (i < s.size() && s[i] == ' ') ++i;
    if (i == 1 && i < s.size() && !is_digit(s[i])) return std::nullopt;
  }
  std::size_t alen = scan_digits(s, i);
  if (alen == 0) return std::nullopt;
  // Without a result letter, a four-digit left side reads as a season
  // ("2005-06"), not a score.
  if (!result && alen > 3) return std::nullopt;
  std::size_t j = i + alen;
  while (j < s.size() && s[j] == ' ') ++j;
  std::size_t dash = 0;
  if (!starts_with_dash(s, j, &dash)) return std::nullopt;
  j += dash;
  while (j < s.size() && s[j] == ' ') ++j;
  std::size_t blen = scan_digits(s, j);
  if (blen == 0 || j + blen != s.size() || blen > 4) return std::nullopt;
  ScoreValue v;
  v.result = result;
  v.points_for = to_int(s.substr(i, alen));
  v.points_against = to_int(s.substr(j, blen));
  return v;
}

// Number with optional sign, thousands separators, decimals and unit.
std::optional<NumberValue> parse_number(std::string_view s, const RecognizerConfig& config) {
  std::string_view body = s;
  std::string unit;
  for (const auto& p : config.prefix_units) {
    if (!p.empty() && body.substr(0, p.size()) == p) {
      unit = p;
      body.remove_prefix(p.size());
      break;
    }
  }
  bool negative = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    negative = body[0] == '-';
    body.remove_prefix(1);
  } else if (body.size() >= 3 && static_cast<unsigned char>(body[0]) == 0xE2 &&
             static_cast<unsigned char>(body[1]) == 0x88 &&
             static_cast<unsigned char>(body[2]) == 0x92) {  // U+2212 minus
    negative = true;
    body.remove_prefix(3);
  }

  std::string digits;
  std::size_t i = 0;
  std::size_t lead = scan_digits(body, 0);
  if (lead > 0) {
    bool grouped = lead <= 3 && lead < body.size() && body[lead] == ',';
    if (grouped) {
      // require strict 3-digit groups
      std::size_t j = lead;
      std::size_t groups = 0;
      while (j < body.size() && body[j] == ',' && scan_digits(body, j + 1) == 3) {
        j += 4;
        ++groups;
      }
      if (groups == 0) return std::nullopt;
      if (j < body.size() && is_digit(body[j])) return std::nullopt;
      for (std::size_t k = 0; k < j; ++k) {
        if (body[k] != ',') digits.push_back(body[k]);
      }
      i = j;
    } else {
      digits.assign(body.substr(0, lead));
      i = lead;
    }
  }
  if (i < body.size() && body[i] == '.') {
    std::size_t frac = scan_digits(body, i + 1);
    if (frac > 0) {
      if (digits.empty()) digits = "0";
      digits.push_back('.');
      digits.append(body.substr(i + 1, frac));
      i += 1 + frac;
    } else if (digits.empty()) {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;

  std::string_view rest = body.substr(i);
  if (!rest.empty()) {
    if (!unit.empty()) return std::nullopt;
    std::string r = to_lower(trim(rest));
    if (r == "%") {
      unit = "%";
    } else {
      auto it = std::find(config.units.begin(), config.units.end(), r);
      if (it == config.units.end()) return std::nullopt;
      unit = *it;
    }
  }
  NumberValue v;
  v.value = std::strtod(digits.c_str(), nullptr);
  if (negative) v.value = -v.value;
  v.unit = std::move(unit);
  v.surface = std::string(s);
  return v;
}

bool is_total_label(std::string_view cell) {
  std::string n = normalize(cell);
  return n == "total" || n == "totals" || n == "overall" || n == "sum";
}


}  // namespace

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// ---------------------------------------------------------------------------

bool is_empty(const TypedValue& v) { return std::holds_alternative<EmptyValue>(v); }

std::optional<double> numeric_value(const TypedValue& v) {
  if (auto n = std::get_if<NumberValue>(&v)) return n->value;
  if (auto d = std::get_if<DateValue>(&v)) {
    if (d->year && !d->month && !d->day) return static_cast<double>(*d->year);
    return std::nullopt;
  }
  if (auto t = std::get_if<TimeValue>(&v)) return t->seconds;
  return std::nullopt;
}

std::optional<double> chrono_key(const TypedValue& v) {
  if (auto d = std::get_if<DateValue>(&v)) {
    if (!d->year) return std::nullopt;
    return *d->year * 10000.0 + d->month.value_or(0) * 100.0 + d->day.value_or(0);
  }
  if (auto t = std::get_if<TimeValue>(&v)) return t->seconds;
  return numeric_value(v);
}

std::string display(const TypedValue& v) {
  struct Visitor {
    std::string operator()(const EmptyValue&) const { return ""; }
    std::string operator()(const TextValue& t) const { return t.text; }
    std::string operator()(const NumberValue& n) const {
      return n.surface.empty() ? format_number(n.value) : n.surface;
    }
    std::string operator()(const DateValue& d) const {
      char buf[32];
      auto part = [](const std::optional<int>& p, int width) {
        if (!p) return std::string(static_cast<std::size_t>(width), 'x');
        char b[8];
        std::snprintf(b, sizeof b, "%0*d", width, *p);
        return std::string(b);
      };
      std::snprintf(buf, sizeof buf, "%s-%s-%s", part(d.year, 4).c_str(),
                    part(d.month, 2).c_str(), part(d.day, 2).c_str());
      if (d.year && !d.month && !d.day) return part(d.year, 4);
      return buf;
    }
    std::string operator()(const TimeValue& t) const {
      long total = static_cast<long>(t.seconds);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%ld:%02ld:%02ld", total / 3600, (total / 60) % 60,
                    total % 60);
      return buf;
    }
    std::string operator()(const ScoreValue& s) const {
      std::string out;
      if (s.result) {
        out.push_back(*s.result);
        out.push_back(' ');
      }
      return out + std::to_string(s.points_for) + "-" + std::to_string(s.points_against);
    }
  };
  return std::visit(Visitor{}, v);
}

// ---------------------------------------------------------------------------

const RecognizerConfig& RecognizerConfig::defaults() {
  static const RecognizerConfig config = [] {
    RecognizerConfig c;
    c.date_formats = {DateFormat::kYmdSlash, DateFormat::kYmdDash, DateFormat::kMonthDayYear,
                      DateFormat::kDayMonthYear, DateFormat::kYear};
    c.units = {"km/h", "km", "mi", "kg", "lb", "m", "ft", "%"};
    return c;
  }();
  return config;
}

RecognizerConfig RecognizerConfig::parse(std::string_view text) {
  RecognizerConfig c;
  c.scores = false;
  c.times_hm = false;
  c.times_hms = false;
  c.numbers = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::string kind = t.substr(0, t.find(' '));
    std::string arg = t.find(' ') == std::string::npos ? "" : trim(t.substr(t.find(' ')));
    if (kind == "score") {
      c.scores = true;
    } else if (kind == "number") {
      c.numbers = true;
    } else if (kind == "time" && arg == "hh:mm:ss") {
      c.times_hms = true;
    } else if (kind == "time" && arg == "hh:mm") {
      c.times_hm = true;
    } else if (kind == "date" && arg == "ymd-slash") {
      c.date_formats.push_back(DateFormat::kYmdSlash);
    } else if (kind == "date" && arg == "ymd-dash") {
      c.date_formats.push_back(DateFormat::kYmdDash);
    } else if (kind == "date" && arg == "month-day-year") {
      c.date_formats.push_back(DateFormat::kMonthDayYear);
    } else if (kind == "date" && arg == "day-month-year") {
      c.date_formats.push_back(DateFormat::kDayMonthYear);
    } else if (kind == "date" && arg == "year") {
      c.date_formats.push_back(DateFormat::kYear);
    } else if (kind == "unit" && !arg.empty()) {
      c.units.push_back(to_lower(arg));
    } else if (kind == "unit-prefix" && !arg.empty()) {
      c.prefix_units.push_back(arg);
    } else {
      throw LoadError("recognizer config line " + std::to_string(lineno) +
                      ": unknown pattern class '" + t + "'");
    }
  }
  std::stable_sort(c.units.begin(), c.units.end(),
                   [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  return c;
}

RecognizerConfig RecognizerConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot read recognizer config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

TypedValue parse_cell(std::string_view text, const RecognizerConfig& config) {
  std::string t = trim(text);
  if (t.empty()) return EmptyValue{};
  if (config.scores) {
    if (auto s = parse_score(t)) return *s;
  }
  if (auto d = parse_date(t, config)) return *d;
  if (auto tm = parse_time(t, config)) return *tm;
  if (config.numbers) {
    if (auto n = parse_number(t, config)) return *n;
  }
  return TextValue{t};
}

// ---------------------------------------------------------------------------

namespace {

void finish_raw(RawTable& table, std::vector<std::vector<std::string>> records) {
  if (records.empty()) throw LoadError("empty table file: " + table.name);
  table.header = std::move(records.front());
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    std::string h = trim(table.header[k]);
    table.header[k] = h.empty() ? "col" + std::to_string(k) : h;
  }
  const std::size_t arity = table.header.size();
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& row = records[r];
    if (row.size() < arity) {
      table.warnings.push_back("row " + std::to_string(r - 1) + ": padded from " +
                               std::to_string(row.size()) + " to " + std::to_string(arity) +
                               " cells");
      row.resize(arity);
    } else if (row.size() > arity) {
      table.warnings.push_back("row " + std::to_string(r - 1) + ": truncated from " +
                               std::to_string(row.size()) + " to " + std::to_string(arity) +
                               " cells");
      row.resize(arity);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw LoadError("table has no rows: " + table.name);
}

}  // namespace

RawTable parse_csv(std::string_view content, std::string name) {
  RawTable table;
  table.name = std::move(name);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // the current field has content or was quoted

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };

  std::size_t i = 0;
  if (content.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // BOM
  for (; i < content.size(); ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '\\' && i + 1 < content.size() && content[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw LoadError("malformed CSV (unterminated quote): " + table.name);
  if (field_started || !field.empty() || !record.empty()) end_record();
  finish_raw(table, std::move(records));
  return table;
}

RawTable parse_table_tsv(std::string_view content, std::string name) {
  RawTable table;
  table.name = std::move(name);
  std::vector<std::vector<std::string>> records;
  for (const auto& line : split(content, '\n')) {
    std::string_view l = line;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.empty()) continue;
    std::vector<std::string> record;
    for (const auto& raw : split(l, '\t')) {
      std::string cell;
      for (std::size_t k = 0; k < raw.size(); ++k) {
        if (raw[k] == '\\' && k + 1 < raw.size()) {
          char e = raw[k + 1];
          if (e == 'n') {
            cell.push_back('\n');
          } else if (e == 'p') {
            cell.push_back('|');
          } else {
            cell.push_back(e);
          }
          ++k;
        } else {
          cell.push_back(raw[k]);
        }
      }
      record.push_back(std::move(cell));
    }
    records.push_back(std::move(record));
  }
  finish_raw(table, std::move(records));
  return table;
}

RawTable load_csv(const std::filesystem::path& path) {
  std::string content = read_file(path);
  if (trim(content).empty()) throw LoadError("empty table file: " + path.string());
  if (path.extension() == ".tsv") return parse_table_tsv(content, path.string());
  return parse_csv(content, path.string());
}

// ---------------------------------------------------------------------------

std::string_view role_name(ColumnRole role) {
  switch (role) {
    case ColumnRole::kDimension: return "dimension";
    case ColumnRole::kMetric: return "metric";
    case ColumnRole::kDate: return "date";
    case ColumnRole::kTime: return "time";
  }
  return "dimension";
}

const ComprehendedColumn* ComprehendedTable::find(std::string_view id) const {
  for (const auto& c : columns) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const ComprehendedColumn& ComprehendedTable::at(std::string_view id) const {
  if (auto c = find(id)) return *c;
  throw std::out_of_range("no column '" + std::string(id) + "' in table " + name);
}

std::vector<const ComprehendedColumn*> ComprehendedTable::dimension_columns() const {
  std::vector<const ComprehendedColumn*> out;
  for (const auto& c : columns) {
    if (c.role == ColumnRole::kDimension && c.origin.part == 0 && c.origin.source >= 0) {
      out.push_back(&c);
    }
  }
  return out;
}

std::vector<const ComprehendedColumn*> ComprehendedTable::metric_columns(bool include_row_id) const {
  std::vector<const ComprehendedColumn*> out;
  for (const auto& c : columns) {
    if (c.role != ColumnRole::kMetric) continue;
    if (c.id == kRowIdColumn && !include_row_id) continue;
    out.push_back(&c);
  }
  return out;
}

ComprehendedTable comprehend(const RawTable& raw, const RecognizerConfig& config) {
  // Share of non-empty cells a recognizer must claim before the column gets
  // a typed twin.
  constexpr double kTypedShare = 0.8;

  ComprehendedTable t;
  t.name = raw.name;
  t.source_header = raw.header;
  t.row_count = raw.rows.size();
  t.warnings = raw.warnings;

  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    std::string_view first;
    for (const auto& cell : raw.rows[r]) {
      if (!trim(cell).empty()) {
        first = cell;
        break;
      }
    }
    if (!first.empty() && is_total_label(first)) {
      t.total_rows.push_back(r);
    } else {
      t.body_rows.push_back(r);
    }
  }

  for (std::size_t j = 0; j < raw.header.size(); ++j) {
    const std::string& heading = raw.header[j];
    const std::string base = "c" + std::to_string(j);
    std::vector<TypedValue> parsed;
    parsed.reserve(raw.rows.size());
    std::size_t nonempty = 0, numbers = 0, dates = 0, times = 0, scores = 0;
    for (const auto& row : raw.rows) {
      TypedValue v = parse_cell(row[j], config);
      if (!is_empty(v)) ++nonempty;
      if (std::holds_alternative<ScoreValue>(v)) ++scores;
      if (std::holds_alternative<DateValue>(v)) ++dates;
      if (std::holds_alternative<TimeValue>(v)) ++times;
      if (std::holds_alternative<NumberValue>(v) ||
          (std::holds_alternative<DateValue>(v) && numeric_value(v))) {
        ++numbers;
      }
      parsed.push_back(std::move(v));
    }
    auto enough = [&](std::size_t n) {
      return nonempty > 0 && static_cast<double>(n) >= kTypedShare * static_cast<double>(nonempty);
    };

    ComprehendedColumn dim;
    dim.id = base;
    dim.name = heading;
    dim.role = ColumnRole::kDimension;
    dim.origin = {static_cast<int>(j), 0};
    for (const auto& row : raw.rows) {
      std::string s = trim(row[j]);
      dim.values.push_back(s.empty() ? TypedValue{EmptyValue{}} : TypedValue{TextValue{s}});
    }
    t.columns.push_back(std::move(dim));

    if (enough(scores)) {
      ComprehendedColumn result{base + "_result", heading + " result", ColumnRole::kDimension, {},
                                {static_cast<int>(j), 1}};
      ComprehendedColumn pf{base + "_for", heading + " points for", ColumnRole::kMetric, {},
                            {static_cast<int>(j), 2}};
      ComprehendedColumn pa{base + "_against", heading + " points against", ColumnRole::kMetric,
                            {}, {static_cast<int>(j), 3}};
      for (const auto& v : parsed) {
        if (auto s = std::get_if<ScoreValue>(&v)) {
          result.values.push_back(s->result ? TypedValue{TextValue{std::string(1, *s->result)}}
                                            : TypedValue{EmptyValue{}});
          pf.values.push_back(NumberValue{static_cast<double>(s->points_for), "",
                                          std::to_string(s->points_for)});
          pa.values.push_back(NumberValue{static_cast<double>(s->points_against), "",
                                          std::to_string(s->points_against)});
        } else {
          result.values.emplace_back(EmptyValue{});
          pf.values.emplace_back(EmptyValue{});
          pa.values.emplace_back(EmptyValue{});
        }
      }
      t.columns.push_back(std::move(result));
      t.columns.push_back(std::move(pf));
      t.columns.push_back(std::move(pa));
      continue;
    }

    if (enough(dates)) {
      ComprehendedColumn date{base + "_date", heading, ColumnRole::kDate, {},
                              {static_cast<int>(j), 0}};
      for (const auto& v : parsed) {
        date.values.push_back(std::holds_alternative<DateValue>(v) ? v : TypedValue{EmptyValue{}});
      }
      t.columns.push_back(std::move(date));
    }
    if (enough(times)) {
      ComprehendedColumn time{base + "_time", heading, ColumnRole::kTime, {},
                              {static_cast<int>(j), 0}};
      ComprehendedColumn secs{base + "_num", heading, ColumnRole::kMetric, {},
                              {static_cast<int>(j), 0}};
      for (std::size_t r = 0; r < parsed.size(); ++r) {
        const auto& v = parsed[r];
        if (auto tm = std::get_if<TimeValue>(&v)) {
          time.values.push_back(v);
          secs.values.push_back(NumberValue{tm->seconds, "s", trim(raw.rows[r][j])});
        } else {
          time.values.emplace_back(EmptyValue{});
          secs.values.emplace_back(EmptyValue{});
        }
      }
      t.columns.push_back(std::move(time));
      t.columns.push_back(std::move(secs));
    } else if (enough(numbers)) {
      ComprehendedColumn metric{base + "_num", heading, ColumnRole::kMetric, {},
                                {static_cast<int>(j), 0}};
      for (std::size_t r = 0; r < parsed.size(); ++r) {
        const auto& v = parsed[r];
        if (auto n = std::get_if<NumberValue>(&v)) {
          metric.values.push_back(*n);
        } else if (auto x = numeric_value(v); x && std::holds_alternative<DateValue>(v)) {
          metric.values.push_back(NumberValue{*x, "", trim(raw.rows[r][j])});
        } else {
          metric.values.emplace_back(EmptyValue{});
        }
      }
      t.columns.push_back(std::move(metric));
    }
  }

  ComprehendedColumn row_id{std::string(kRowIdColumn), "RowID", ColumnRole::kMetric,
                            std::vector<TypedValue>(raw.rows.size(), EmptyValue{}), {-1, 0}};
  for (std::size_t i = 0; i < t.body_rows.size(); ++i) {
    row_id.values[t.body_rows[i]] =
        NumberValue{static_cast<double>(i), "", std::to_string(i)};
  }
  t.columns.push_back(std::move(row_id));
  return t;
}

// ---------------------------------------------------------------------------

const KbEntry* KnowledgeBase::lookup(std::string_view normalized_key) const {
  auto it = by_key_.find(std::string(normalized_key));
  return it == by_key_.end() ? nullptr : &entries_[it->second];
}

const std::vector<std::size_t>& KnowledgeBase::entries_starting_with(std::string_view token) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_first_token_.find(std::string(token));
  return it == by_first_token_.end() ? kNone : it->second;
}

std::size_t KnowledgeBase::word_frequency(std::string_view word) const {
  auto it = frequency_.find(std::string(word));
  return it == frequency_.end() ? 0 : it->second;
}

void KnowledgeBase::add(std::string_view surface, KbRef ref) {
  std::string key = normalize(surface);
  if (key.empty()) return;
  auto tokens = word_tokens(key);
  for (const auto& w : tokens) ++frequency_[w];
  auto [it, inserted] = by_key_.try_emplace(key, entries_.size());
  if (inserted) {
    entries_.push_back(KbEntry{key, tokens, {}});
    if (!tokens.empty()) by_first_token_[tokens.front()].push_back(it->second);
    longest_ = std::max(longest_, tokens.size());
  }
  auto& refs = entries_[it->second].refs;
  if (std::find(refs.begin(), refs.end(), ref) == refs.end()) refs.push_back(std::move(ref));
}

KnowledgeBase build_knowledge_base(const ComprehendedTable& table) {
  KnowledgeBase kb;
  for (const auto& c : table.columns) {
    kb.add(c.name, KbRef{KbRef::Kind::kHeading, c.id, 0});
  }
  for (const auto* c : table.dimension_columns()) {
    for (std::size_t r = 0; r < c->values.size(); ++r) {
      if (auto t = std::get_if<TextValue>(&c->values[r])) {
        kb.add(t->text, KbRef{KbRef::Kind::kCell, c->id, r});
      }
    }
  }
  return kb;
}

}  // namespace tabqa
