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

// Table comprehension: raw CSV in, typed and enriched table out.
//
// A source column always keeps its original strings as a dimension column.
// Depending on what the recognizers find in it, it may additionally get a
// metric twin (parsed numbers), a date or time column, or three score parts
// (result, points for, points against). A synthetic RowID metric encodes row
// order over the body rows; detected Total rows are kept aside so they never
// take part in aggregation.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace tabqa {

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> warnings;
};

struct EmptyValue {
  bool operator==(const EmptyValue&) const = default;
};
struct TextValue {
  std::string text;
  bool operator==(const TextValue&) const = default;
};
struct NumberValue {
  double value = 0.0;
  std::string unit;
  std::string surface;
  bool operator==(const NumberValue&) const = default;
};
struct DateValue {
  std::optional<int> year;
  std::optional<int> month;
  std::optional<int> day;
  bool operator==(const DateValue&) const = default;
};
struct TimeValue {
  double seconds = 0.0;
  bool operator==(const TimeValue&) const = default;
};
struct ScoreValue {
  std::optional<char> result;
  int points_for = 0;
  int points_against = 0;
  bool operator==(const ScoreValue&) const = default;
};

using TypedValue =
    std::variant<EmptyValue, TextValue, NumberValue, DateValue, TimeValue, ScoreValue>;

bool is_empty(const TypedValue& v);
// Number value, the year of a year-only date, or the seconds of a time.
std::optional<double> numeric_value(const TypedValue& v);
// Display form: original surface for numbers, ISO-like form for dates.
std::string display(const TypedValue& v);
// Sort key for chronological comparison of dates; missing parts sort first.
std::optional<double> chrono_key(const TypedValue& v);
// Integral values without a fraction, others with up to 10 significant digits.
std::string format_number(double v);

enum class DateFormat { kYmdSlash, kYmdDash, kMonthDayYear, kDayMonthYear, kYear };

// Which recognizers run in parse_cell. Loaded from a plain-text file with one
// pattern class per line, e.g. "date ymd-slash" or "unit km/h".
struct RecognizerConfig {
  bool scores = true;
  std::vector<DateFormat> date_formats;
  bool times_hms = true;
  bool times_hm = true;
  bool numbers = true;
  std::vector<std::string> units;         // suffixes, matched longest first
  std::vector<std::string> prefix_units;  // e.g. currency symbols

  static const RecognizerConfig& defaults();
  static RecognizerConfig load(const std::filesystem::path& path);
  static RecognizerConfig parse(std::string_view text);
};

TypedValue parse_cell(std::string_view text,
                      const RecognizerConfig& config = RecognizerConfig::defaults());

// Reads a CSV (RFC-4180, also accepting backslash-escaped quotes) or one of
// the dataset's .tsv table variants. Short rows are padded with empty cells,
// long rows truncated; both leave a warning on the result.
RawTable load_csv(const std::filesystem::path& path);
RawTable parse_csv(std::string_view content, std::string name);
RawTable parse_table_tsv(std::string_view content, std::string name);

enum class ColumnRole { kDimension, kMetric, kDate, kTime };
std::string_view role_name(ColumnRole role);

struct ColumnOrigin {
  int source = -1;  // -1 for the synthetic RowID column
  int part = 0;     // 0 for the direct column, 1.. for split parts
};

struct ComprehendedColumn {
  std::string id;
  std::string name;
  ColumnRole role = ColumnRole::kDimension;
  std::vector<TypedValue> values;  // indexed by source row
  ColumnOrigin origin;
};

inline constexpr std::string_view kRowIdColumn = "row_id";

struct ComprehendedTable {
  std::string name;
  std::vector<std::string> source_header;
  std::size_t row_count = 0;  // source rows, body and total
  std::vector<ComprehendedColumn> columns;
  std::vector<std::size_t> body_rows;
  std::vector<std::size_t> total_rows;
  std::vector<std::string> warnings;

  const ComprehendedColumn* find(std::string_view id) const;
  const ComprehendedColumn& at(std::string_view id) const;  // throws std::out_of_range
  const ComprehendedColumn& row_id() const { return at(kRowIdColumn); }
  // Dimension columns (text), left to right, excluding score parts.
  std::vector<const ComprehendedColumn*> dimension_columns() const;
  std::vector<const ComprehendedColumn*> metric_columns(bool include_row_id) const;
};

ComprehendedTable comprehend(const RawTable& raw,
                             const RecognizerConfig& config = RecognizerConfig::defaults());

struct KbRef {
  enum class Kind { kHeading, kCell };
  Kind kind = Kind::kHeading;
  std::string column;
  std::size_t row = 0;  // source row; meaningful for cells only
  bool operator==(const KbRef&) const = default;
};

struct KbEntry {
  std::string key;                  // normalized surface
  std::vector<std::string> tokens;  // word tokens of the key
  std::vector<KbRef> refs;
};

// Maps normalized surface strings of headings and cells to table references.
class KnowledgeBase {
 public:
  const KbEntry* lookup(std::string_view normalized_key) const;
  const std::vector<KbEntry>& entries() const { return entries_; }
  // Entries whose first token equals `token`.
  const std::vector<std::size_t>& entries_starting_with(std::string_view token) const;
  std::size_t longest_entry_tokens() const { return longest_; }
  // Occurrences of a word across all indexed headings and cells.
  std::size_t word_frequency(std::string_view word) const;
  const std::unordered_map<std::string, std::size_t>& vocabulary() const { return frequency_; }

  void add(std::string_view surface, KbRef ref);

 private:
  std::vector<KbEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_key_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
  std::unordered_map<std::string, std::size_t> frequency_;
  std::size_t longest_ = 0;
};

KnowledgeBase build_knowledge_base(const ComprehendedTable& table);

}  // namespace tabqa
