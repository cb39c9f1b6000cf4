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

#include "tabqa/question_typer.h"

#include <algorithm>
#include <set>

namespace tabqa {

std::string_view slot_kind_name(SlotKind kind) {
  switch (kind) {
    case SlotKind::kDimension: return "dimension";
    case SlotKind::kMetric: return "metric";
    case SlotKind::kFilter: return "filter";
    case SlotKind::kAnyColumn: return "column";
  }
  return "?";
}

int MissingOperandReport::missing_columns() const {
  int n = 0;
  for (const auto& m : missing) {
    if (m.kind != SlotKind::kFilter) n += m.count;
  }
  return n;
}

int MissingOperandReport::missing_filters() const {
  int n = 0;
  for (const auto& m : missing) {
    if (m.kind == SlotKind::kFilter) n += m.count;
  }
  return n;
}

bool is_yes_no_question(const AnnotatedQuery& aq) {
  static const std::set<std::string, std::less<>> kAuxiliaries = {
      "is",  "are", "was",   "were",  "did",    "does",  "do",   "has",
      "have", "had", "can", "could", "will", "would", "should", "isn't",
      "wasn't", "didn't", "doesn't", "aren't", "weren't"};
  return !aq.tokens.empty() && kAuxiliaries.count(aq.tokens.front().text) > 0;
}

QuestionType classify(const AnnotatedQuery& aq, const SemanticParse& parse) {
  if (is_yes_no_question(aq)) return QuestionType::kOtherType;
  const auto filters = parse.filters.size();
  const bool positional =
      std::any_of(parse.filters.begin(), parse.filters.end(), [](const Filter& f) {
        return f.is_position();
      });
  if (parse.has_intent("DIFFERENCE")) return QuestionType::kDifference;
  if (parse.has_intent("OR") && filters >= 2) return QuestionType::kAOrB;
  if (parse.has_intent("BOTH") && filters >= 2) return QuestionType::kPosBoth;
  if (parse.has_intent("SAME")) return QuestionType::kSameValue;
  if (positional || parse.has_intent("BEFORE") || parse.has_intent("AFTER")) {
    return QuestionType::kBefAfter;
  }
  if (parse.has_intent("FIRST") || parse.has_intent("LAST")) return QuestionType::kFirstLast;
  if (parse.has_intent("SORT_MAX") || parse.has_intent("SORT_MIN")) {
    // The headword asks for an entity of the table unless a metric claimed it.
    const bool metric_headword = std::any_of(parse.metrics.begin(), parse.metrics.end(),
                                             [](const ColumnSlot& s) { return s.target; });
    if (!aq.headword || metric_headword) return QuestionType::kSortMet;
    return QuestionType::kSortDim;
  }
  if (parse.has_intent("HOW_MANY")) return QuestionType::kHowMany;
  if (filters >= 1) return QuestionType::kLookup;
  return QuestionType::kOtherType;
}

OperandRequirement required_operands(QuestionType t) {
  switch (t) {
    case QuestionType::kSortDim: return {1, 1, 0, 0};
    case QuestionType::kSortMet: return {0, 1, 0, 0};
    case QuestionType::kFirstLast: return {1, 0, 0, 0};
    case QuestionType::kBefAfter: return {0, 0, 1, 0};
    case QuestionType::kSameValue: return {2, 0, 1, 0};
    case QuestionType::kPosBoth: return {1, 0, 2, 0};
    case QuestionType::kAOrB: return {0, 0, 2, 0};
    case QuestionType::kDifference: return {0, 1, 2, 0};
    case QuestionType::kHowMany: return {0, 1, 0, 0};
    case QuestionType::kLookup: return {1, 0, 1, 0};
    case QuestionType::kOtherType: return {0, 0, 0, 1};
  }
  return {};
}

MissingOperandReport find_missing(const SemanticParse& parse, QuestionType t,
                                  const AnnotatedQuery& aq) {
  MissingOperandReport r;
  r.type = t;
  r.terms = aq.abduction_terms();
  const OperandRequirement req = required_operands(t);
  const ColumnSlot* target = parse.target();
  const bool hole = !parse.holes.empty();
  const int dims = static_cast<int>(parse.dimensions.size());
  const int mets = static_cast<int>(parse.metrics.size());
  const int others = dims + mets - (target ? 1 : 0);

  // The answer column: the headword's column, or with no headword hole any
  // column the parse found.
  const bool has_projection = target != nullptr || (!hole && dims + mets > 0);
  const bool target_is_dimension =
      target != nullptr &&
      std::any_of(parse.dimensions.begin(), parse.dimensions.end(),
                  [&](const ColumnSlot& s) { return &s == target; });

  auto need = [&](SlotKind kind, int count, Eligibility e, bool is_target) {
    if (count > 0) r.missing.push_back({kind, count, e, is_target});
  };
  const int missing_filters = std::max(0, req.filters - static_cast<int>(parse.filters.size()));

  switch (t) {
    case QuestionType::kSortDim:
      need(SlotKind::kDimension,
           target_is_dimension || (!hole && !target && dims > 0) ? 0 : 1,
           Eligibility::kDimensionColumns, true);
      need(SlotKind::kMetric, mets > 0 ? 0 : 1, Eligibility::kMetricColumns, false);
      break;
    case QuestionType::kSortMet:
    case QuestionType::kDifference:
      need(SlotKind::kMetric, mets > 0 ? 0 : 1, Eligibility::kMetricColumns, false);
      break;
    case QuestionType::kFirstLast:
    case QuestionType::kLookup:
    case QuestionType::kPosBoth:
      need(SlotKind::kDimension, has_projection ? 0 : 1, Eligibility::kDimensionColumns, true);
      break;
    case QuestionType::kSameValue: {
      // Answer column plus the column whose value is shared. Without a
      // headword, the first column found is taken as the answer column.
      int compared = 0;
      if (target) {
        compared = others;
      } else if (hole) {
        compared = dims + mets;
      } else {
        compared = dims + mets - 1;
      }
      need(SlotKind::kDimension, has_projection ? 0 : 1, Eligibility::kDimensionColumns, true);
      need(SlotKind::kDimension, compared > 0 ? 0 : 1, Eligibility::kDimensionColumns, false);
      break;
    }
    case QuestionType::kHowMany:
      need(SlotKind::kMetric, has_projection ? 0 : 1, Eligibility::kAnyColumn, true);
      break;
    case QuestionType::kOtherType:
      need(SlotKind::kAnyColumn, dims + mets > 0 ? 0 : 1, Eligibility::kAnyColumn, true);
      break;
    case QuestionType::kBefAfter:
    case QuestionType::kAOrB:
      break;
  }
  need(SlotKind::kFilter, missing_filters, Eligibility::kNone, false);
  return r;
}

AnswerKind answer_kind_for(QuestionType t, bool plural_headword, AnswerKind parsed) {
  switch (t) {
    case QuestionType::kHowMany:
    case QuestionType::kDifference:
    case QuestionType::kSortMet:
      return AnswerKind::kNumber;
    case QuestionType::kOtherType:
      return parsed;
    default:
      return plural_headword ? AnswerKind::kList : AnswerKind::kCell;
  }
}

void assign_type(SemanticParse& parse, const AnnotatedQuery& aq) {
  const QuestionType t = classify(aq, parse);
  parse.question_type = t;
  parse.answer_kind = answer_kind_for(t, aq.headword_plural(), parse.answer_kind);
}

}  // namespace tabqa
