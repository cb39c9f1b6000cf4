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

#include "tabqa/query.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tabqa/text.h"

namespace tabqa {

std::vector<std::string> Answer::texts() const {
  std::vector<std::string> out;
  if (const auto* s = std::get_if<Scalar>(&value)) out.push_back(display(*s));
  if (const auto* l = std::get_if<List>(&value)) {
    for (const auto& v : *l) out.push_back(display(v));
  }
  if (const auto* b = std::get_if<bool>(&value)) out.push_back(*b ? "yes" : "no");
  return out;
}

bool values_equal(const TypedValue& a, const TypedValue& b) {
  if (is_empty(a) || is_empty(b)) return false;
  auto na = numeric_value(a), nb = numeric_value(b);
  if (na && nb) return *na == *nb;
  return normalize(display(a)) == normalize(display(b));
}

bool condition_holds(const Condition& c, const ComprehendedTable& table, std::size_t row) {
  if (const auto* eq = std::get_if<DimensionEquals>(&c)) {
    const auto* col = table.find(eq->column);
    if (!col) return false;
    const TypedValue& cell = col->values[row];
    if (is_empty(cell)) return false;
    auto n = numeric_value(cell);
    if (n) {
      if (auto m = numeric_value(parse_cell(eq->value))) return *n == *m;
    }
    return normalize(display(cell)) == normalize(eq->value);
  }
  const auto& mc = std::get<MetricCompare>(c);
  const auto* col = table.find(mc.column);
  if (!col) return false;
  auto n = numeric_value(col->values[row]);
  return n && compare(*n, mc.comparator, mc.bound);
}

namespace {

std::optional<double> order_key(const TypedValue& v) {
  if (auto n = numeric_value(v)) return n;
  return chrono_key(v);
}

std::string condition_column(const Condition& c) {
  if (const auto* eq = std::get_if<DimensionEquals>(&c)) return eq->column;
  return std::get<MetricCompare>(c).column;
}

NumberValue number(double v) { return NumberValue{v, "", format_number(v)}; }

class StageRunner {
 public:
  StageRunner(const ComprehendedTable& table, ExecutionResult& out) : table_(table), out_(out) {}

  std::vector<ResultValue> run(const Stage& s, const std::vector<ResultValue>* inner) {
    for (const auto& c : s.where) check_types(c);
    for (const auto& c : s.any_of) check_types(c);
    for (const auto& c : s.branches) check_types(c);

    if (s.link.kind == LinkKind::kAggregateInner) {
      return aggregate(s, inner ? *inner : std::vector<ResultValue>{});
    }

    // Row selection as a mask over source rows.
    std::vector<char> keep(table_.row_count, 0);
    for (auto r : table_.body_rows) keep[r] = 1;
    for (const auto& c : s.where) {
      for (std::size_t r = 0; r < keep.size(); ++r) {
        if (keep[r] && !condition_holds(c, table_, r)) keep[r] = 0;
      }
    }
    if (!s.any_of.empty()) {
      for (std::size_t r = 0; r < keep.size(); ++r) {
        if (!keep[r]) continue;
        keep[r] = std::any_of(s.any_of.begin(), s.any_of.end(),
                              [&](const Condition& c) { return condition_holds(c, table_, r); });
      }
    }
    if (s.date_range && !s.date_column.empty()) {
      const auto* col = table_.find(s.date_column);
      for (std::size_t r = 0; r < keep.size(); ++r) {
        if (!keep[r]) continue;
        auto k = col ? chrono_key(col->values[r]) : std::nullopt;
        if (!k || (s.date_range->after && !(*k > *s.date_range->after)) ||
            (s.date_range->before && !(*k < *s.date_range->before))) {
          keep[r] = 0;
        }
      }
    }
    std::vector<std::size_t> rows;
    for (auto r : table_.body_rows) {
      if (keep[r]) rows.push_back(r);
    }

    rows = apply_link(s, rows, inner);

    if (!s.branches.empty()) {
      std::vector<ResultValue> all;
      for (const auto& b : s.branches) {
        std::vector<std::size_t> sub;
        for (auto r : rows) {
          if (condition_holds(b, table_, r)) sub.push_back(r);
        }
        auto part = order_limit_project(s, sub);
        all.insert(all.end(), part.begin(), part.end());
      }
      return all;
    }
    if (s.aggregate) {
      std::vector<ResultValue> input;
      const auto* col = table_.find(s.aggregate_column);
      if (!col) {
        out_.diagnostics.push_back("unknown aggregate column " + s.aggregate_column);
        return {};
      }
      for (auto r : rows) input.push_back({col->values[r], {{col->id, r}}});
      return aggregate(s, input);
    }
    return order_limit_project(s, rows);
  }

 private:
  void check_types(const Condition& c) {
    const auto* mc = std::get_if<MetricCompare>(&c);
    if (!mc) return;
    const auto* col = table_.find(mc->column);
    if (!col || col->role != ColumnRole::kMetric) {
      out_.diagnostics.push_back("type mismatch: comparison on non-metric column " + mc->column);
    }
  }

  std::vector<std::size_t> apply_link(const Stage& s, std::vector<std::size_t> rows,
                                      const std::vector<ResultValue>* inner) {
    if (s.link.kind == LinkKind::kNone) return rows;
    static const std::vector<ResultValue> kEmpty;
    const auto& in = inner ? *inner : kEmpty;
    std::vector<std::size_t> out;
    switch (s.link.kind) {
      case LinkKind::kValueEquals: {
        std::unordered_set<std::size_t> inner_rows;
        for (const auto& v : in) {
          for (const auto& src : v.sources) inner_rows.insert(src.row);
        }
        const auto* col = table_.find(s.link.column);
        if (!col) return {};
        for (auto r : rows) {
          if (inner_rows.count(r)) continue;
          for (const auto& v : in) {
            if (values_equal(col->values[r], v.value)) {
              out.push_back(r);
              break;
            }
          }
        }
        return out;
      }
      case LinkKind::kAdjacent: {
        if (in.empty() || in.front().sources.empty()) return {};
        const std::size_t anchor = in.front().sources.front().row;
        const auto& ids = table_.row_id().values;
        const auto anchor_id = numeric_value(ids[anchor]);
        if (!anchor_id) return {};
        const bool before =
            s.link.relation == Relation::kBefore || s.link.relation == Relation::kPrevious;
        std::optional<std::size_t> best;
        double best_id = 0;
        for (auto r : rows) {
          auto id = numeric_value(ids[r]);
          if (!id || r == anchor) continue;
          if (before ? (*id < *anchor_id && (!best || *id > best_id))
                     : (*id > *anchor_id && (!best || *id < best_id))) {
            best = r;
            best_id = *id;
          }
        }
        if (best) out.push_back(*best);
        return out;
      }
      case LinkKind::kProjectionIn: {
        const auto* col = table_.find(s.projection);
        if (!col) return {};
        for (auto r : rows) {
          if (std::any_of(in.begin(), in.end(), [&](const ResultValue& v) {
                return values_equal(col->values[r], v.value);
              })) {
            out.push_back(r);
          }
        }
        return out;
      }
      default:
        return rows;
    }
  }

  std::vector<ResultValue> order_limit_project(const Stage& s, std::vector<std::size_t> rows) {
    if (s.order) {
      const auto* col = table_.find(s.order->column);
      if (!col) return {};
      std::vector<std::pair<double, std::size_t>> keyed;
      for (auto r : rows) {
        if (auto k = order_key(col->values[r])) keyed.emplace_back(*k, r);
      }
      const bool asc = s.order->direction == SortDirection::kAscending;
      std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        return asc ? a.first < b.first : a.first > b.first;
      });
      rows.clear();
      for (const auto& [k, r] : keyed) rows.push_back(r);
    }
    const auto* proj = table_.find(s.projection);
    if (!proj) {
      out_.diagnostics.push_back("unknown projection column " + s.projection);
      return {};
    }
    std::vector<ResultValue> values;
    for (auto r : rows) {
      if (s.limit && values.size() >= static_cast<std::size_t>(*s.limit)) break;
      if (is_empty(proj->values[r])) continue;
      values.push_back({proj->values[r], {{proj->id, r}}});
    }
    return values;
  }

  std::vector<ResultValue> aggregate(const Stage& s, const std::vector<ResultValue>& input) {
    const Aggregation agg = s.aggregate.value_or(Aggregation::kCount);
    std::vector<CellRef> sources;
    std::vector<std::pair<double, const ResultValue*>> nums;
    std::size_t non_empty = 0;
    std::set<std::string> distinct;
    for (const auto& v : input) {
      if (is_empty(v.value)) continue;
      ++non_empty;
      distinct.insert(normalize(display(v.value)));
      if (auto n = numeric_value(v.value)) nums.emplace_back(*n, &v);
    }
    auto collect = [&](bool numeric_only) {
      for (const auto& v : input) {
        if (is_empty(v.value) || (numeric_only && !numeric_value(v.value))) continue;
        sources.insert(sources.end(), v.sources.begin(), v.sources.end());
      }
    };
    switch (agg) {
      case Aggregation::kCount:
        collect(false);
        return {{number(static_cast<double>(non_empty)), sources}};
      case Aggregation::kCountDistinct:
        collect(false);
        return {{number(static_cast<double>(distinct.size())), sources}};
      case Aggregation::kSum:
      case Aggregation::kAverage: {
        if (nums.empty()) return {};
        double sum = 0;
        for (const auto& [n, v] : nums) sum += n;
        collect(true);
        double result = agg == Aggregation::kSum ? sum : sum / static_cast<double>(nums.size());
        return {{number(result), sources}};
      }
      case Aggregation::kMin:
      case Aggregation::kMax: {
        if (nums.empty()) return {};
        const auto* best = &nums.front();
        for (const auto& e : nums) {
          if (agg == Aggregation::kMax ? e.first > best->first : e.first < best->first) best = &e;
        }
        return {*best->second};
      }
      case Aggregation::kDifference: {
        if (nums.size() < 2) return {};
        sources = nums[0].second->sources;
        sources.insert(sources.end(), nums[1].second->sources.begin(),
                       nums[1].second->sources.end());
        return {{number(std::fabs(nums[0].first - nums[1].first)), sources}};
      }
    }
    return {};
  }

  const ComprehendedTable& table_;
  ExecutionResult& out_;
};

// Date or time columns usable as a chronological key.
std::vector<const ComprehendedColumn*> chrono_columns(const ComprehendedTable& t) {
  std::vector<const ComprehendedColumn*> out;
  for (const auto& c : t.columns) {
    if (c.role == ColumnRole::kDate || c.role == ColumnRole::kTime) out.push_back(&c);
  }
  return out;
}

const ColumnSlot* first_metric(const SemanticParse& p) {
  for (const auto& m : p.metrics) {
    if (!m.target) return &m;
  }
  return p.metrics.empty() ? nullptr : &p.metrics.front();
}

std::vector<Condition> row_conditions(const SemanticParse& p) {
  std::vector<Condition> out;
  for (const auto& f : p.filters) {
    if (!f.is_position()) out.push_back(f.as_row_condition());
  }
  return out;
}

}  // namespace

std::string projection_column(const SemanticParse& parse) {
  if (const auto* t = parse.target()) return t->column;
  if (!parse.holes.empty()) return "";
  if (!parse.dimensions.empty()) return parse.dimensions.front().column;
  if (!parse.metrics.empty()) return parse.metrics.front().column;
  return "";
}

QueryPlan build_plan(const SemanticParse& parse, const ComprehendedTable& table) {
  if (!parse.question_type) throw PlanError("parse has no question type");
  QueryPlan plan;
  plan.table = table.name;
  plan.type = *parse.question_type;
  Stage& outer = plan.outer;

  const auto chrono = chrono_columns(table);
  if (parse.date_range && chrono.size() == 1) {
    // Parsed bounds are years. Date keys are year * 10000 + month * 100 + day,
    // so "after Y" starts past the last key of year Y.
    DateRange range = *parse.date_range;
    if (chrono.front()->role == ColumnRole::kDate) {
      if (range.after) range.after = *range.after * 10000.0 + 9999.0;
      if (range.before) range.before = *range.before * 10000.0;
    }
    outer.date_range = range;
    outer.date_column = chrono.front()->id;
  }
  const std::string projection = projection_column(parse);
  auto require_projection = [&]() {
    if (projection.empty()) throw PlanError("missing operand: dimension (answer column)");
    return projection;
  };
  auto require_metric = [&]() -> const std::string& {
    const auto* m = first_metric(parse);
    if (!m) throw PlanError("missing operand: metric");
    return m->column;
  };
  auto require_filters = [&](std::size_t n) {
    if (parse.filters.size() < n) {
      throw PlanError("missing operand: " + std::to_string(n - parse.filters.size()) + " filter(s)");
    }
  };
  auto maybe_sum = [&]() {
    if ((parse.aggregation == Aggregation::kSum || parse.aggregation == Aggregation::kAverage) &&
        first_metric(parse)) {
      outer.aggregate = parse.aggregation;
      outer.aggregate_column = first_metric(parse)->column;
      return true;
    }
    return false;
  };
  const SortDirection direction =
      parse.sort ? parse.sort->direction : SortDirection::kDescending;

  switch (plan.type) {
    case QuestionType::kLookup:
      require_filters(1);
      outer.where = row_conditions(parse);
      if (!maybe_sum()) outer.projection = require_projection();
      break;
    case QuestionType::kSortMet:
      outer.where = row_conditions(parse);
      outer.aggregate =
          direction == SortDirection::kAscending ? Aggregation::kMin : Aggregation::kMax;
      outer.aggregate_column = require_metric();
      break;
    case QuestionType::kSortDim:
      outer.where = row_conditions(parse);
      outer.order = OrderBy{require_metric(), direction};
      outer.limit = parse.limit.value_or(1);
      outer.projection = require_projection();
      break;
    case QuestionType::kFirstLast: {
      outer.where = row_conditions(parse);
      const std::string key = chrono.size() == 1 ? chrono.front()->id : std::string(kRowIdColumn);
      const bool last = parse.has_intent("LAST") && !parse.has_intent("FIRST");
      outer.order = OrderBy{key, last ? SortDirection::kDescending : SortDirection::kAscending};
      outer.limit = parse.limit.value_or(1);
      outer.projection = require_projection();
      break;
    }
    case QuestionType::kHowMany: {
      outer.where = row_conditions(parse);
      const std::string counted = require_projection();
      const auto& col = table.at(counted);
      // "how many gold medals did chile win": a quantity column is summed
      // over the selected entity rows, not counted.
      // Year-like columns (with a date reading) are never quantities.
      const bool entity_rows =
          std::all_of(outer.where.begin(), outer.where.end(), [](const Condition& c) {
            return std::holds_alternative<DimensionEquals>(c);
          });
      const ComprehendedColumn* quantity = nullptr;
      bool year_like = false;
      if (entity_rows && col.id != kRowIdColumn) {
        for (const auto& c : table.columns) {
          if (c.origin.source != col.origin.source || c.origin.part != col.origin.part) continue;
          if (c.role == ColumnRole::kMetric) quantity = &c;
          if (c.role == ColumnRole::kDate) year_like = true;
        }
      }
      if (year_like) quantity = nullptr;
      if (quantity) {
        outer.aggregate = Aggregation::kSum;
        outer.aggregate_column = quantity->id;
      } else {
        outer.aggregate = col.role == ColumnRole::kMetric ? Aggregation::kCount
                                                          : Aggregation::kCountDistinct;
        outer.aggregate_column = counted;
      }
      break;
    }
    case QuestionType::kDifference: {
      require_filters(2);
      Stage inner;
      inner.branches = {parse.filters[0].as_row_condition(), parse.filters[1].as_row_condition()};
      for (std::size_t i = 2; i < parse.filters.size(); ++i) {
        inner.where.push_back(parse.filters[i].as_row_condition());
      }
      inner.projection = require_metric();
      inner.limit = 1;
      inner.date_range = outer.date_range;
      inner.date_column = outer.date_column;
      plan.inner = std::move(inner);
      outer = Stage{};
      outer.link.kind = LinkKind::kAggregateInner;
      outer.aggregate = Aggregation::kDifference;
      break;
    }
    case QuestionType::kSameValue: {
      require_filters(1);
      const std::string target = require_projection();
      std::string compared;
      for (const auto* slots : {&parse.dimensions, &parse.metrics}) {
        for (const auto& s : *slots) {
          if (compared.empty() && s.column != target) compared = s.column;
        }
      }
      if (compared.empty()) throw PlanError("missing operand: dimension (shared value)");
      Stage inner;
      inner.where = {parse.filters[0].as_row_condition()};
      inner.projection = compared;
      inner.limit = 1;
      plan.inner = std::move(inner);
      for (std::size_t i = 1; i < parse.filters.size(); ++i) {
        outer.where.push_back(parse.filters[i].as_row_condition());
      }
      outer.link = Link{LinkKind::kValueEquals, compared, Relation::kBefore};
      outer.projection = target;
      break;
    }
    case QuestionType::kPosBoth: {
      require_filters(2);
      const std::string target = require_projection();
      Stage inner;
      inner.where = {parse.filters[0].as_row_condition()};
      inner.projection = target;
      plan.inner = std::move(inner);
      for (std::size_t i = 1; i < parse.filters.size(); ++i) {
        outer.where.push_back(parse.filters[i].as_row_condition());
      }
      outer.link.kind = LinkKind::kProjectionIn;
      outer.projection = target;
      break;
    }
    case QuestionType::kAOrB: {
      require_filters(2);
      // The alternatives are two equality filters, preferably on one column.
      std::vector<std::size_t> eqs;
      for (std::size_t i = 0; i < parse.filters.size(); ++i) {
        if (std::holds_alternative<DimensionEquals>(parse.filters[i].condition)) eqs.push_back(i);
      }
      if (eqs.size() < 2) throw PlanError("missing operand: two alternatives");
      std::pair<std::size_t, std::size_t> alt{eqs[0], eqs[1]};
      for (std::size_t a = 0; a < eqs.size(); ++a) {
        for (std::size_t b = a + 1; b < eqs.size(); ++b) {
          if (condition_column(parse.filters[eqs[a]].as_row_condition()) ==
              condition_column(parse.filters[eqs[b]].as_row_condition())) {
            alt = {eqs[a], eqs[b]};
            a = b = eqs.size();
          }
        }
      }
      for (std::size_t i = 0; i < parse.filters.size(); ++i) {
        const Condition c = parse.filters[i].as_row_condition();
        if (i == alt.first || i == alt.second) {
          outer.any_of.push_back(c);
        } else {
          outer.where.push_back(c);
        }
      }
      outer.projection = condition_column(outer.any_of.front());
      if ((parse.has_intent("SORT_MAX") || parse.has_intent("SORT_MIN")) && first_metric(parse)) {
        outer.order = OrderBy{first_metric(parse)->column, direction};
        outer.limit = 1;
      }
      break;
    }
    case QuestionType::kBefAfter: {
      require_filters(1);
      std::size_t anchor = 0;
      Relation relation = parse.has_intent("AFTER") && !parse.has_intent("BEFORE")
                              ? Relation::kAfter
                              : Relation::kBefore;
      for (std::size_t i = 0; i < parse.filters.size(); ++i) {
        if (const auto* pos = std::get_if<RowPosition>(&parse.filters[i].condition)) {
          anchor = i;
          relation = pos->relation;
          break;
        }
      }
      const Condition anchor_condition = parse.filters[anchor].as_row_condition();
      Stage inner;
      inner.where = {anchor_condition};
      inner.projection = std::string(kRowIdColumn);
      inner.limit = 1;
      plan.inner = std::move(inner);
      for (std::size_t i = 0; i < parse.filters.size(); ++i) {
        if (i != anchor) outer.where.push_back(parse.filters[i].as_row_condition());
      }
      outer.link = Link{LinkKind::kAdjacent, "", relation};
      outer.projection = projection.empty() ? condition_column(anchor_condition) : projection;
      break;
    }
    case QuestionType::kOtherType:
      outer.where = row_conditions(parse);
      if (!maybe_sum()) throw PlanError("no semantics for this question");
      break;
  }

  auto check = [&](const std::string& id) {
    if (!id.empty() && !table.find(id)) throw PlanError("unknown column " + id);
  };
  for (const Stage* s : {&plan.outer, plan.inner ? &*plan.inner : nullptr}) {
    if (!s) continue;
    check(s->projection);
    check(s->aggregate_column);
    check(s->link.column);
    if (s->order) check(s->order->column);
  }
  return plan;
}

ExecutionResult execute(const QueryPlan& plan, const ComprehendedTable& table) {
  ExecutionResult result;
  StageRunner runner(table, result);
  if (plan.inner) {
    auto inner = runner.run(*plan.inner, nullptr);
    result.values = runner.run(plan.outer, &inner);
  } else {
    result.values = runner.run(plan.outer, nullptr);
  }
  return result;
}

Answer normalize_answer(const ExecutionResult& result, QuestionType type, bool plural) {
  Answer a;
  if (result.values.empty()) return a;
  auto cite = [&](const ResultValue& v) {
    a.provenance.insert(a.provenance.end(), v.sources.begin(), v.sources.end());
  };
  const bool numeric = type == QuestionType::kHowMany || type == QuestionType::kDifference ||
                       type == QuestionType::kSortMet;
  const bool list = !numeric && (plural || (type == QuestionType::kAOrB && result.values.size() > 1));
  if (list) {
    Answer::List values;
    for (const auto& v : result.values) {
      values.push_back(v.value);
      cite(v);
    }
    a.value = std::move(values);
  } else {
    a.value = result.values.front().value;
    cite(result.values.front());
  }
  return a;
}

namespace {

std::string sql_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string sql_name(const ComprehendedTable& t, const std::string& id) {
  const auto* c = t.find(id);
  std::string name = c ? c->name : id;
  std::string out = "\"";
  for (char ch : name) {
    out += ch;
    if (ch == '"') out += '"';
  }
  return out + "\"";
}

// A date key as a quoted ISO date; the open ends of a year print as its
// first and last day.
std::string sql_date_key(double key) {
  const long k = static_cast<long>(key);
  const long year = k / 10000, rest = k % 10000;
  long month = rest / 100, day = rest % 100;
  if (rest == 9999) {
    month = 12;
    day = 31;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "'%04ld-%02ld-%02ld'", year, std::max(month, 1L),
                std::max(day, 1L));
  return buf;
}

std::string sql_condition(const ComprehendedTable& t, const Condition& c) {
  if (const auto* eq = std::get_if<DimensionEquals>(&c)) {
    return sql_name(t, eq->column) + " = " + sql_quote(eq->value);
  }
  const auto& mc = std::get<MetricCompare>(c);
  return sql_name(t, mc.column) + " " + std::string(comparator_symbol(mc.comparator)) + " " +
         format_number(mc.bound);
}

std::string sql_stage(const ComprehendedTable& t, const Stage& s, const std::string& inner_sql) {
  std::ostringstream q;
  std::string select;
  if (s.link.kind == LinkKind::kAggregateInner) {
    return "SELECT ABS(MAX(v) - MIN(v)) FROM (" + inner_sql + ") AS inner_values(v)";
  }
  if (s.aggregate) {
    const std::string col = sql_name(t, s.aggregate_column);
    switch (*s.aggregate) {
      case Aggregation::kCount: select = "COUNT(" + col + ")"; break;
      case Aggregation::kCountDistinct: select = "COUNT(DISTINCT " + col + ")"; break;
      case Aggregation::kSum: select = "SUM(" + col + ")"; break;
      case Aggregation::kAverage: select = "AVG(" + col + ")"; break;
      case Aggregation::kMin: select = "MIN(" + col + ")"; break;
      case Aggregation::kMax: select = "MAX(" + col + ")"; break;
      case Aggregation::kDifference: select = "ABS(MAX(" + col + ") - MIN(" + col + "))"; break;
    }
  } else {
    select = sql_name(t, s.projection);
  }
  q << "SELECT " << select << " FROM \"" << t.name << "\" AS t";
  std::vector<std::string> conds;
  conds.push_back(sql_name(t, std::string(kRowIdColumn)) + " IS NOT NULL");
  for (const auto& c : s.where) conds.push_back(sql_condition(t, c));
  if (!s.any_of.empty()) {
    std::vector<std::string> alts;
    for (const auto& c : s.any_of) alts.push_back(sql_condition(t, c));
    conds.push_back("(" + join(alts, " OR ") + ")");
  }
  if (!s.branches.empty()) {
    std::vector<std::string> alts;
    for (const auto& c : s.branches) alts.push_back(sql_condition(t, c));
    conds.push_back("(" + join(alts, " OR ") + ")");
  }
  if (s.date_range) {
    const auto* col = t.find(s.date_column);
    const bool dates = col && col->role == ColumnRole::kDate;
    auto bound = [&](double key) { return dates ? sql_date_key(key) : format_number(key); };
    if (s.date_range->after) {
      conds.push_back(sql_name(t, s.date_column) + " > " + bound(*s.date_range->after));
    }
    if (s.date_range->before) {
      conds.push_back(sql_name(t, s.date_column) + " < " + bound(*s.date_range->before));
    }
  }
  switch (s.link.kind) {
    case LinkKind::kValueEquals:
      conds.push_back(sql_name(t, s.link.column) + " IN (" + inner_sql + ")");
      conds.push_back("t.row NOT IN (anchor rows)");
      break;
    case LinkKind::kProjectionIn:
      conds.push_back(sql_name(t, s.projection) + " IN (" + inner_sql + ")");
      break;
    case LinkKind::kAdjacent: {
      const bool before = s.link.relation == Relation::kBefore || s.link.relation == Relation::kPrevious;
      conds.push_back(sql_name(t, std::string(kRowIdColumn)) + (before ? " < (" : " > (") + inner_sql + ")");
      break;
    }
    default:
      break;
  }
  q << " WHERE " << join(conds, " AND ");
  if (s.link.kind == LinkKind::kAdjacent) {
    const bool before = s.link.relation == Relation::kBefore || s.link.relation == Relation::kPrevious;
    q << " ORDER BY " << sql_name(t, std::string(kRowIdColumn)) << (before ? " DESC" : " ASC")
      << " LIMIT 1";
  } else if (s.order) {
    q << " ORDER BY " << sql_name(t, s.order->column)
      << (s.order->direction == SortDirection::kAscending ? " ASC" : " DESC");
  }
  if (s.limit && s.link.kind != LinkKind::kAdjacent) {
    q << " LIMIT " << *s.limit << (s.branches.empty() ? "" : " PER BRANCH");
  }
  return q.str();
}

}  // namespace

std::string to_sql(const QueryPlan& plan, const ComprehendedTable& table) {
  std::string inner = plan.inner ? sql_stage(table, *plan.inner, "") : "";
  return sql_stage(table, plan.outer, inner);
}

}  // namespace tabqa
