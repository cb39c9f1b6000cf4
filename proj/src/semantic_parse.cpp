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

#include "tabqa/semantic_parse.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "tabqa/text.h"

namespace tabqa {

namespace {

constexpr std::string_view kTypeNames[] = {
    "SORT_DIM", "SORT_MET",   "FIRST_LAST", "BEF_AFTER", "SAME_VALUE", "POS_BOTH",
    "A_OR_B",   "DIFFERENCE", "HOW_MANY",   "LOOKUP",    "OTHER_TYPE",
};

std::string number_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string anchor_text(const AnchorFilter& a) {
  if (const auto* eq = std::get_if<DimensionEquals>(&a)) {
    return "eq(" + eq->column + "=" + normalize(eq->value) + ")";
  }
  const auto& mc = std::get<MetricCompare>(a);
  return "cmp(" + mc.column + std::string(comparator_symbol(mc.comparator)) +
         number_text(mc.bound) + ")";
}

std::string slot_text(const ColumnSlot& s) {
  std::string out = s.column;
  if (s.target) out += "*";
  return out;
}

}  // namespace

std::string_view question_type_name(QuestionType t) {
  return kTypeNames[static_cast<int>(t)];
}

std::optional<QuestionType> question_type_from_name(std::string_view name) {
  for (int i = 0; i < kQuestionTypeCount; ++i) {
    if (kTypeNames[i] == name) return static_cast<QuestionType>(i);
  }
  return std::nullopt;
}

const std::vector<QuestionType>& all_question_types() {
  static const std::vector<QuestionType> all = [] {
    std::vector<QuestionType> v;
    for (int i = 0; i < kQuestionTypeCount; ++i) v.push_back(static_cast<QuestionType>(i));
    return v;
  }();
  return all;
}

std::string_view aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::kSum: return "sum";
    case Aggregation::kCount: return "count";
    case Aggregation::kCountDistinct: return "count-distinct";
    case Aggregation::kAverage: return "average";
    case Aggregation::kMin: return "min";
    case Aggregation::kMax: return "max";
    case Aggregation::kDifference: return "difference";
  }
  return "?";
}

std::string_view answer_kind_name(AnswerKind k) {
  switch (k) {
    case AnswerKind::kCell: return "cell";
    case AnswerKind::kList: return "list";
    case AnswerKind::kNumber: return "number";
    case AnswerKind::kBoolean: return "boolean";
  }
  return "?";
}

std::string_view comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::kLt: return "<";
    case Comparator::kLe: return "<=";
    case Comparator::kEq: return "=";
    case Comparator::kGe: return ">=";
    case Comparator::kGt: return ">";
    case Comparator::kNe: return "<>";
  }
  return "?";
}

bool compare(double lhs, Comparator c, double rhs) {
  switch (c) {
    case Comparator::kLt: return lhs < rhs;
    case Comparator::kLe: return lhs <= rhs;
    case Comparator::kEq: return lhs == rhs;
    case Comparator::kGe: return lhs >= rhs;
    case Comparator::kGt: return lhs > rhs;
    case Comparator::kNe: return lhs != rhs;
  }
  return false;
}

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::kBefore: return "before";
    case Relation::kAfter: return "after";
    case Relation::kFirst: return "first";
    case Relation::kLast: return "last";
    case Relation::kNext: return "next";
    case Relation::kPrevious: return "previous";
  }
  return "?";
}

AnchorFilter Filter::as_row_condition() const {
  if (const auto* eq = std::get_if<DimensionEquals>(&condition)) return *eq;
  if (const auto* mc = std::get_if<MetricCompare>(&condition)) return *mc;
  return std::get<RowPosition>(condition).anchor;
}

bool SemanticParse::has_intent(std::string_view id) const {
  return std::find(intents.begin(), intents.end(), id) != intents.end();
}

bool SemanticParse::has_intent_prefix(std::string_view prefix) const {
  return std::any_of(intents.begin(), intents.end(),
                     [&](const std::string& i) { return i.rfind(prefix, 0) == 0; });
}

const ColumnSlot* SemanticParse::target() const {
  for (const auto& d : dimensions) {
    if (d.target) return &d;
  }
  for (const auto& m : metrics) {
    if (m.target) return &m;
  }
  return nullptr;
}

std::string describe_filter(const Filter& f) {
  if (const auto* pos = std::get_if<RowPosition>(&f.condition)) {
    return "pos(" + std::string(relation_name(pos->relation)) + "," + anchor_text(pos->anchor) +
           ")";
  }
  return anchor_text(f.as_row_condition());
}

std::string structural_key(const SemanticParse& p) {
  std::ostringstream out;
  auto slots = [&](const char* tag, const std::vector<ColumnSlot>& v) {
    std::vector<std::string> parts;
    for (const auto& s : v) parts.push_back(slot_text(s));
    std::sort(parts.begin(), parts.end());
    out << tag << "[" << join(parts, ",") << "]";
  };
  slots("M", p.metrics);
  slots("D", p.dimensions);
  std::vector<std::string> filters;
  for (const auto& f : p.filters) filters.push_back(describe_filter(f));
  std::sort(filters.begin(), filters.end());
  out << "F[" << join(filters, ",") << "]";
  if (p.date_range) {
    out << "R[" << (p.date_range->after ? number_text(*p.date_range->after) : "") << ","
        << (p.date_range->before ? number_text(*p.date_range->before) : "") << "]";
  }
  if (p.sort) {
    out << "S[" << p.sort->column << ","
        << (p.sort->direction == SortDirection::kAscending ? "asc" : "desc") << "]";
  }
  if (p.limit) out << "L[" << *p.limit << "]";
  if (p.aggregation) out << "A[" << aggregation_name(*p.aggregation) << "]";
  out << "K[" << answer_kind_name(p.answer_kind) << "]";
  if (p.question_type) out << "T[" << question_type_name(*p.question_type) << "]";
  std::vector<std::string> intents = p.intents;
  std::sort(intents.begin(), intents.end());
  out << "I[" << join(intents, ",") << "]";
  out << "H[" << p.holes.size() << "]";
  std::vector<double> numbers = p.numbers;
  std::sort(numbers.begin(), numbers.end());
  out << "N[";
  for (double n : numbers) out << number_text(n) << ",";
  out << "]";
  return out.str();
}

std::uint64_t structural_hash(const SemanticParse& p) {
  // FNV-1a, stable across platforms and runs.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : structural_key(p)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace tabqa
