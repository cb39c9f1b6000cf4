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

// The semantic parse: typed operand slots that later become a query plan.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tabqa/annotator.h"

namespace tabqa {

enum class QuestionType {
  kSortDim,
  kSortMet,
  kFirstLast,
  kBefAfter,
  kSameValue,
  kPosBoth,
  kAOrB,
  kDifference,
  kHowMany,
  kLookup,
  kOtherType,
};
inline constexpr int kQuestionTypeCount = 11;
std::string_view question_type_name(QuestionType t);
std::optional<QuestionType> question_type_from_name(std::string_view name);
const std::vector<QuestionType>& all_question_types();

enum class Aggregation { kSum, kCount, kCountDistinct, kAverage, kMin, kMax, kDifference };
std::string_view aggregation_name(Aggregation a);

enum class AnswerKind { kCell, kList, kNumber, kBoolean };
std::string_view answer_kind_name(AnswerKind k);

enum class Comparator { kLt, kLe, kEq, kGe, kGt, kNe };
std::string_view comparator_symbol(Comparator c);
bool compare(double lhs, Comparator c, double rhs);

enum class SortDirection { kAscending, kDescending };

enum class Relation { kBefore, kAfter, kFirst, kLast, kNext, kPrevious };
std::string_view relation_name(Relation r);

struct DimensionEquals {
  std::string column;
  std::string value;
  int annotation = -1;
  bool operator==(const DimensionEquals& o) const {
    return column == o.column && value == o.value;
  }
};

struct MetricCompare {
  std::string column;
  Comparator comparator = Comparator::kEq;
  double bound = 0.0;
  bool operator==(const MetricCompare&) const = default;
};

using AnchorFilter = std::variant<DimensionEquals, MetricCompare>;

struct RowPosition {
  Relation relation = Relation::kBefore;
  AnchorFilter anchor;
  bool operator==(const RowPosition&) const = default;
};

struct Filter {
  std::variant<DimensionEquals, MetricCompare, RowPosition> condition;
  std::vector<int> provenance;  // annotation ids

  bool is_position() const { return std::holds_alternative<RowPosition>(condition); }
  // The filter reduced to a plain row condition (a position filter yields its
  // anchor).
  AnchorFilter as_row_condition() const;
};

struct AbductionFill {
  ProvenanceKind kind = ProvenanceKind::kMachineLearntAbductive;
  double confidence = 1.0;
  std::vector<std::string> terms;  // abduction input that produced the fill
  int placeholder = -1;            // placeholder annotation replaced, if any
};

struct ColumnSlot {
  std::string column;
  std::vector<int> provenance;
  bool target = false;  // names the answer column (bound to the headword)
  std::optional<AbductionFill> abduced;
};

struct SortSpec {
  std::string column;  // empty: the parse's metric
  SortDirection direction = SortDirection::kDescending;
};

// Exclusive bounds on the chronological key of the table's date column.
struct DateRange {
  std::optional<double> after;
  std::optional<double> before;
};

struct SemanticParse {
  std::vector<ColumnSlot> metrics;
  std::vector<ColumnSlot> dimensions;
  std::vector<Filter> filters;
  std::optional<DateRange> date_range;
  std::optional<SortSpec> sort;
  std::optional<int> limit;
  std::optional<Aggregation> aggregation;
  AnswerKind answer_kind = AnswerKind::kCell;
  std::optional<QuestionType> question_type;
  std::vector<int> provenance;       // every consumed annotation id
  std::vector<std::string> intents;  // consumed intent ids
  std::vector<int> holes;            // placeholder annotations awaiting abduction
  std::vector<double> numbers;       // number literals not used by a filter
  std::vector<std::string> rules;    // grammar rules applied

  bool has_intent(std::string_view id) const;
  bool has_intent_prefix(std::string_view prefix) const;
  const ColumnSlot* target() const;
};

// Canonical text of everything except provenance; equal keys mean
// structurally equal parses.
std::string structural_key(const SemanticParse& p);
std::uint64_t structural_hash(const SemanticParse& p);
std::string describe_filter(const Filter& f);

}  // namespace tabqa
