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

// Rule-based question typing and the deductive step of abduction: which
// operands does the type need, and which of them did parsing fail to find.

#pragma once

#include <string>
#include <vector>

#include "tabqa/annotator.h"
#include "tabqa/semantic_parse.h"

namespace tabqa {

struct OperandRequirement {
  int dimensions = 0;
  int metrics = 0;
  int filters = 0;
  int any_columns = 0;  // "at least one column" of either kind
  bool operator==(const OperandRequirement&) const = default;
};

enum class SlotKind { kDimension, kMetric, kFilter, kAnyColumn };
std::string_view slot_kind_name(SlotKind kind);

// Which columns may fill a missing column slot.
enum class Eligibility { kDimensionColumns, kMetricColumns, kAnyColumn, kNone };

struct MissingSlot {
  SlotKind kind = SlotKind::kDimension;
  int count = 0;
  Eligibility eligible = Eligibility::kNone;
  bool target = false;  // the fill becomes the answer column
};

struct MissingOperandReport {
  QuestionType type = QuestionType::kOtherType;
  std::vector<MissingSlot> missing;
  std::vector<std::string> terms;  // unmatched and placeholder terms

  bool complete() const { return missing.empty(); }
  int missing_columns() const;
  int missing_filters() const;
};

// Questions opening with an auxiliary verb ("is", "did", ...).
bool is_yes_no_question(const AnnotatedQuery& aq);

QuestionType classify(const AnnotatedQuery& aq, const SemanticParse& parse);
OperandRequirement required_operands(QuestionType t);
MissingOperandReport find_missing(const SemanticParse& parse, QuestionType t,
                                  const AnnotatedQuery& aq);
AnswerKind answer_kind_for(QuestionType t, bool plural_headword, AnswerKind parsed);

// Sets question_type and answer_kind on the parse.
void assign_type(SemanticParse& parse, const AnnotatedQuery& aq);

}  // namespace tabqa
