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

// Query plans and their in-memory evaluation.
//
// A plan has an outer stage and at most one inner stage. A stage selects
// body rows (conjunctive `where`, optional disjunctive `any_of`, optional
// date range), may link to the inner stage's output, then aggregates or
// orders, limits and projects. With `branches`, the stage runs once per
// branch condition and concatenates the outputs.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tabqa/semantic_parse.h"
#include "tabqa/table.h"

namespace tabqa {

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Condition = AnchorFilter;

// How a stage uses the inner stage's output.
enum class LinkKind {
  kNone,
  kValueEquals,     // keep rows whose link column equals an inner value; drop inner rows
  kAdjacent,        // nearest row before/after the first inner row, by RowID
  kProjectionIn,    // keep rows whose projected value is among the inner values
  kAggregateInner,  // aggregate the inner values (no row selection)
};

struct Link {
  LinkKind kind = LinkKind::kNone;
  std::string column;                    // kValueEquals
  Relation relation = Relation::kBefore;  // kAdjacent
};

struct OrderBy {
  std::string column;
  SortDirection direction = SortDirection::kAscending;
};

struct Stage {
  std::vector<Condition> where;
  std::vector<Condition> any_of;
  std::vector<Condition> branches;
  std::optional<DateRange> date_range;
  std::string date_column;  // chronological key for date_range
  Link link;
  std::optional<Aggregation> aggregate;
  std::string aggregate_column;
  std::optional<OrderBy> order;
  std::optional<int> limit;  // per branch when branches are present
  std::string projection;
};

struct QueryPlan {
  std::string table;
  QuestionType type = QuestionType::kOtherType;
  std::optional<Stage> inner;
  Stage outer;

  int depth() const { return inner ? 2 : 1; }
};

struct CellRef {
  std::string column;
  std::size_t row = 0;
  bool operator==(const CellRef&) const = default;
  bool operator<(const CellRef& o) const {
    return column != o.column ? column < o.column : row < o.row;
  }
};

struct ResultValue {
  TypedValue value;
  std::vector<CellRef> sources;
  bool operator==(const ResultValue&) const = default;
};

struct ExecutionResult {
  std::vector<ResultValue> values;
  std::vector<std::string> diagnostics;
};

struct Answer {
  struct None {};
  using Scalar = TypedValue;
  using List = std::vector<TypedValue>;
  std::variant<None, Scalar, List, bool> value;
  std::vector<CellRef> provenance;

  bool is_none() const { return std::holds_alternative<None>(value); }
  // Answer values as display strings; empty for none.
  std::vector<std::string> texts() const;
};

// The answer column of a parse: the headword's column, else the first
// dimension, else the first metric; empty when there is none.
std::string projection_column(const SemanticParse& parse);

// Throws PlanError naming the missing operand when the parse is incomplete.
QueryPlan build_plan(const SemanticParse& parse, const ComprehendedTable& table);

ExecutionResult execute(const QueryPlan& plan, const ComprehendedTable& table);

Answer normalize_answer(const ExecutionResult& result, QuestionType type, bool plural);

// Equivalent SQL text, for display.
std::string to_sql(const QueryPlan& plan, const ComprehendedTable& table);

// Typed row and value comparisons used during execution.
bool condition_holds(const Condition& c, const ComprehendedTable& table, std::size_t row);
bool values_equal(const TypedValue& a, const TypedValue& b);

}  // namespace tabqa
