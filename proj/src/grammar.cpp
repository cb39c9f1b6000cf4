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

#include "tabqa/grammar.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tabqa/text.h"

namespace tabqa {

namespace {

const std::set<std::string, std::less<>> kEntitySymbols = {"DIM", "MET", "DATE",
                                                           "CELL", "NUMBER", "PLACEHOLDER"};

bool is_intent_symbol(std::string_view s) { return kEntitySymbols.count(s) == 0; }

[[noreturn]] void fail(const std::string& line, const std::string& why) {
  throw GrammarError("grammar: " + why + " in rule '" + line + "'");
}

GrammarAction parse_action(const std::string& text, const std::string& line) {
  GrammarAction a;
  auto eq = text.find('=');
  if (eq == std::string::npos) fail(line, "action without '='");
  a.slot = trim(text.substr(0, eq));
  std::string value = trim(text.substr(eq + 1));
  auto open = value.find('(');
  if (open != std::string::npos) {
    if (value.back() != ')') fail(line, "unbalanced parenthesis");
    a.function = trim(value.substr(0, open));
    for (auto& arg : split(value.substr(open + 1, value.size() - open - 2), ',')) {
      a.args.push_back(trim(arg));
    }
  } else {
    a.args.push_back(value);
  }
  return a;
}

// Index of a "$k" reference, or -1 when the argument is not a reference.
int ref_index(const std::string& arg) {
  if (arg.size() < 2 || arg[0] != '$') return -1;
  int k = 0;
  for (std::size_t i = 1; i < arg.size(); ++i) {
    if (arg[i] < '0' || arg[i] > '9') return -1;
    k = k * 10 + (arg[i] - '0');
  }
  return k - 1;
}

std::optional<Relation> relation_from(std::string_view s) {
  for (Relation r : {Relation::kBefore, Relation::kAfter, Relation::kFirst, Relation::kLast,
                     Relation::kNext, Relation::kPrevious}) {
    if (relation_name(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<Aggregation> aggregation_from(std::string_view s) {
  for (Aggregation a : {Aggregation::kSum, Aggregation::kCount, Aggregation::kCountDistinct,
                        Aggregation::kAverage, Aggregation::kMin, Aggregation::kMax,
                        Aggregation::kDifference}) {
    if (aggregation_name(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<Comparator> comparator_from_intent(std::string_view intent) {
  if (intent == "CMP_GT") return Comparator::kGt;
  if (intent == "CMP_GE") return Comparator::kGe;
  if (intent == "CMP_LT") return Comparator::kLt;
  if (intent == "CMP_LE") return Comparator::kLe;
  if (intent == "CMP_EQ") return Comparator::kEq;
  if (intent == "CMP_NE") return Comparator::kNe;
  return std::nullopt;
}

void validate(const GrammarRule& rule, const std::string& line) {
  auto symbol_of = [&](const std::string& arg) -> const std::string& {
    int k = ref_index(arg);
    if (k < 0 || k >= static_cast<int>(rule.symbols.size())) fail(line, "bad reference " + arg);
    return rule.symbols[k];
  };
  auto expect = [&](const std::string& arg, std::string_view kind) {
    const std::string& s = symbol_of(arg);
    if (kind == "INTENT" ? !is_intent_symbol(s) : s != kind) {
      fail(line, arg + " must be " + std::string(kind) + ", not " + s);
    }
  };
  auto arity = [&](const GrammarAction& a, std::size_t n) {
    if (a.args.size() != n) fail(line, "wrong argument count for " + a.slot);
  };
  for (const auto& a : rule.actions) {
    if (a.slot == "dimension") {
      arity(a, 1);
      expect(a.args[0], "DIM");
    } else if (a.slot == "metric") {
      arity(a, 1);
      expect(a.args[0], "MET");
    } else if (a.slot == "hole") {
      arity(a, 1);
      expect(a.args[0], "PLACEHOLDER");
    } else if (a.slot == "intent") {
      arity(a, 1);
      expect(a.args[0], "INTENT");
    } else if (a.slot == "filter") {
      if (a.function == "equals") {
        arity(a, 1);
        expect(a.args[0], "CELL");
      } else if (a.function == "compare") {
        arity(a, 3);
        if (symbol_of(a.args[0]).rfind("CMP_", 0) != 0) fail(line, "comparison needs a CMP_ intent");
        expect(a.args[1], "NUMBER");
        expect(a.args[2], "MET");
      } else if (a.function == "compare_eq") {
        arity(a, 2);
        expect(a.args[0], "NUMBER");
        expect(a.args[1], "MET");
      } else if (a.function == "position") {
        arity(a, 2);
        if (!relation_from(a.args[0])) fail(line, "unknown relation " + a.args[0]);
        expect(a.args[1], "CELL");
      } else {
        fail(line, "unknown filter function " + a.function);
      }
    } else if (a.slot == "sort") {
      arity(a, 1);
      if (a.args[0] != "asc" && a.args[0] != "desc") fail(line, "sort must be asc or desc");
    } else if (a.slot == "limit") {
      arity(a, 1);
      if (ref_index(a.args[0]) >= 0) {
        expect(a.args[0], "NUMBER");
      } else {
        int v = 0;
        try {
          v = std::stoi(a.args[0]);
        } catch (const std::exception&) {
          fail(line, "limit must be a positive integer");
        }
        if (v <= 0) fail(line, "limit must be a positive integer");
      }
    } else if (a.slot == "aggregation") {
      arity(a, 1);
      if (!aggregation_from(a.args[0])) fail(line, "unknown aggregation " + a.args[0]);
    } else if (a.slot == "date_range") {
      arity(a, 1);
      if (a.function != "after" && a.function != "before") fail(line, "date_range needs after/before");
      expect(a.args[0], "NUMBER");
    } else {
      fail(line, "unknown slot " + a.slot);
    }
  }
}

// One rule application: which annotation fills each symbol.
struct Item {
  const GrammarRule* rule = nullptr;
  std::vector<int> annotations;
  std::vector<std::size_t> tokens;  // sorted
  std::size_t first = 0;
};

bool single_valued(const GrammarAction& a) {
  return a.slot == "sort" || a.slot == "limit" || a.slot == "aggregation" || a.slot == "date_range";
}

std::string conflict_slot(const GrammarAction& a) {
  return a.slot == "date_range" ? a.slot + "." + a.function : a.slot;
}

std::string conflict_value(const GrammarAction& a, const Item& item, const AnnotatedQuery& aq) {
  std::string v = join(a.args, ",");
  int k = ref_index(a.args[0]);
  if (k >= 0) v = aq.annotation(item.annotations[k]).phrase;
  return v;
}

const KbRef& ref_of(const Annotation& a) { return std::get<EntityTarget>(a.target).ref; }

bool overlaps_headword(const Annotation& a, const AnnotatedQuery& aq) {
  if (!aq.headword) return false;
  const auto& h = *aq.headword;
  return a.start < h.start + h.length && h.start < a.start + a.length;
}

// True when the annotation is one of two readings (dimension and metric) of
// the same source column heading at the same span.
bool is_twin_heading(const Annotation& a, const AnnotatedQuery& aq,
                     const ComprehendedTable& table) {
  const auto* col = table.find(ref_of(a).column);
  if (!col || col->origin.source < 0) return false;
  for (const auto& b : aq.annotations) {
    if (b.id == a.id || b.start != a.start || b.length != a.length || !b.is_entity()) continue;
    const auto& r = ref_of(b);
    if (r.kind != KbRef::Kind::kHeading) continue;
    const auto* other = table.find(r.column);
    if (!other || other->origin.source != col->origin.source || other->role == col->role) continue;
    if ((other->role == ColumnRole::kDimension || other->role == ColumnRole::kMetric) &&
        other->origin.part == col->origin.part) {
      return true;
    }
  }
  return false;
}

void add_slot(std::vector<ColumnSlot>& slots, ColumnSlot slot) {
  for (auto& s : slots) {
    if (s.column == slot.column) {
      s.target = s.target || slot.target;
      s.provenance.insert(s.provenance.end(), slot.provenance.begin(), slot.provenance.end());
      return;
    }
  }
  slots.push_back(std::move(slot));
}

class CandidateBuilder {
 public:
  CandidateBuilder(const AnnotatedQuery& aq, const ComprehendedTable& table)
      : aq_(aq), table_(table) {}

  // Builds the parses for one set of items; slot conflicts fork.
  void build(std::vector<const Item*> items, std::vector<SemanticParse>& out) const {
    // Find the first single-valued slot assigned two different values.
    std::map<std::string, std::map<std::string, std::vector<std::size_t>>> assigned;
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (const auto& a : items[i]->rule->actions) {
        if (single_valued(a)) assigned[conflict_slot(a)][conflict_value(a, *items[i], aq_)].push_back(i);
      }
    }
    for (const auto& [slot, values] : assigned) {
      if (values.size() < 2) continue;
      for (const auto& [value, keep] : values) {
        std::set<std::size_t> drop;
        for (const auto& [other, idx] : values) {
          if (other != value) drop.insert(idx.begin(), idx.end());
        }
        std::vector<const Item*> fork;
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (!drop.count(i)) fork.push_back(items[i]);
        }
        build(fork, out);
      }
      return;
    }
    if (auto p = apply(items)) out.push_back(std::move(*p));
  }

 private:
  std::optional<SemanticParse> apply(const std::vector<const Item*>& items) const {
    SemanticParse p;
    for (const Item* item : items) {
      p.rules.push_back(item->rule->id);
      p.provenance.insert(p.provenance.end(), item->annotations.begin(), item->annotations.end());
      auto ann = [&](const std::string& arg) -> const Annotation& {
        return aq_.annotation(item->annotations[ref_index(arg)]);
      };
      for (const auto& act : item->rule->actions) {
        if (act.slot == "dimension" || act.slot == "metric") {
          const Annotation& a = ann(act.args[0]);
          ColumnSlot slot{ref_of(a).column, {a.id}, overlaps_headword(a, aq_), std::nullopt};
          add_slot(act.slot == "dimension" ? p.dimensions : p.metrics, std::move(slot));
        } else if (act.slot == "hole") {
          p.holes.push_back(ann(act.args[0]).id);
        } else if (act.slot == "intent") {
          p.intents.push_back(std::get<IntentTarget>(ann(act.args[0]).target).intent);
        } else if (act.slot == "filter") {
          Filter f;
          for (const auto& arg : act.args) {
            if (ref_index(arg) >= 0) f.provenance.push_back(ann(arg).id);
          }
          if (act.function == "equals" || act.function == "position") {
            const Annotation& a = ann(act.args.back());
            const KbRef& ref = ref_of(a);
            DimensionEquals eq{ref.column, display(table_.at(ref.column).values.at(ref.row)), a.id};
            if (act.function == "equals") {
              f.condition = eq;
            } else {
              f.condition = RowPosition{*relation_from(act.args[0]), eq};
            }
          } else {
            const bool eq = act.function == "compare_eq";
            const Annotation& num = ann(act.args[eq ? 0 : 1]);
            const Annotation& met = ann(act.args[eq ? 1 : 2]);
            MetricCompare mc;
            mc.column = ref_of(met).column;
            mc.bound = std::get<NumberTarget>(num.target).value;
            mc.comparator =
                eq ? Comparator::kEq
                   : *comparator_from_intent(std::get<IntentTarget>(ann(act.args[0]).target).intent);
            if (!eq) p.intents.push_back(std::get<IntentTarget>(ann(act.args[0]).target).intent);
            f.condition = mc;
          }
          bool duplicate = false;
          for (auto& g : p.filters) {
            if (describe_filter(g) == describe_filter(f)) {
              g.provenance.insert(g.provenance.end(), f.provenance.begin(), f.provenance.end());
              duplicate = true;
            }
          }
          if (!duplicate) p.filters.push_back(std::move(f));
        } else if (act.slot == "sort") {
          p.sort = SortSpec{"", act.args[0] == "asc" ? SortDirection::kAscending
                                                     : SortDirection::kDescending};
        } else if (act.slot == "limit") {
          if (ref_index(act.args[0]) >= 0) {
            double v = std::get<NumberTarget>(ann(act.args[0]).target).value;
            if (v >= 1 && v == static_cast<int>(v)) p.limit = static_cast<int>(v);
          } else {
            p.limit = std::stoi(act.args[0]);
          }
        } else if (act.slot == "aggregation") {
          p.aggregation = aggregation_from(act.args[0]);
        } else if (act.slot == "date_range") {
          double v = std::get<NumberTarget>(ann(act.args[0]).target).value;
          if (!p.date_range) p.date_range = DateRange{};
          (act.function == "after" ? p.date_range->after : p.date_range->before) = v;
        }
      }
    }
    std::sort(p.provenance.begin(), p.provenance.end());
    p.provenance.erase(std::unique(p.provenance.begin(), p.provenance.end()), p.provenance.end());
    if (p.aggregation == Aggregation::kDifference && p.filters.size() != 2) p.aggregation.reset();
    p.answer_kind = aq_.headword_plural() ? AnswerKind::kList : AnswerKind::kCell;

    // A heading that reads both as a dimension and as a metric is taken as a
    // metric only when an operation needs one, and never as the answer
    // column.
    const bool metric_needed = p.has_intent("SORT_MAX") || p.has_intent("SORT_MIN") ||
                               p.has_intent("SUM") || p.has_intent("AVERAGE") ||
                               p.has_intent("DIFFERENCE");
    for (const auto& s : p.dimensions) {
      const Annotation& a = aq_.annotation(s.provenance.front());
      if (!s.target && metric_needed && is_twin_heading(a, aq_, table_)) return std::nullopt;
    }
    for (const auto& s : p.metrics) {
      const Annotation& a = aq_.annotation(s.provenance.front());
      if ((s.target || !metric_needed) && is_twin_heading(a, aq_, table_)) return std::nullopt;
    }

    // Target slot first, then by column id.
    auto order = [](std::vector<ColumnSlot>& v) {
      std::stable_sort(v.begin(), v.end(), [](const ColumnSlot& a, const ColumnSlot& b) {
        if (a.target != b.target) return a.target;
        return a.column < b.column;
      });
    };
    order(p.dimensions);
    order(p.metrics);
    std::sort(p.filters.begin(), p.filters.end(), [](const Filter& a, const Filter& b) {
      return describe_filter(a) < describe_filter(b);
    });
    std::sort(p.intents.begin(), p.intents.end());
    std::sort(p.holes.begin(), p.holes.end());
    std::sort(p.rules.begin(), p.rules.end());
    return p;
  }

  const AnnotatedQuery& aq_;
  const ComprehendedTable& table_;
};

std::vector<Item> match_items(const AnnotatedQuery& aq, const ComprehendedTable& table,
                              const Grammar& grammar) {
  const auto& anns = aq.annotations;
  std::vector<std::vector<std::string>> symbols;
  for (const auto& a : anns) symbols.push_back(annotation_symbols(a, table));

  auto only_stopwords_between = [&](const Annotation& a, const Annotation& b) {
    if (b.start < a.start + a.length) return false;
    for (std::size_t t = a.start + a.length; t < b.start; ++t) {
      if (!aq.stopword[t]) return false;
    }
    return true;
  };
  auto disjoint = [](const Annotation& a, const Annotation& b) {
    return a.start + a.length <= b.start || b.start + b.length <= a.start;
  };

  std::vector<Item> items;
  std::unordered_set<std::string> seen;
  for (const auto& rule : grammar.rules()) {
    const std::size_t k = rule.symbols.size();
    // The headword names the answer; a heading there never becomes a filter operand.
    const bool filters = std::any_of(rule.actions.begin(), rule.actions.end(), [](const auto& a) {
      return a.slot == "filter" || a.slot == "date_range";
    });
    std::vector<std::size_t> chosen;
    // depth-first over symbol positions
    auto extend = [&](auto&& self) -> void {
      const std::size_t pos = chosen.size();
      if (pos == k) {
        Item item;
        item.rule = &rule;
        std::string key = rule.id;
        for (auto i : chosen) {
          const Annotation& a = anns[i];
          item.annotations.push_back(a.id);
          for (std::size_t t = a.start; t < a.start + a.length; ++t) item.tokens.push_back(t);
          key += "|" + std::to_string(a.start) + ":" + std::to_string(a.length) + ":";
          if (const auto* e = std::get_if<EntityTarget>(&a.target)) {
            key += (e->ref.kind == KbRef::Kind::kHeading ? "H:" : "C:") + e->ref.column + "=" + a.key;
          } else if (const auto* in = std::get_if<IntentTarget>(&a.target)) {
            key += "I:" + in->intent;
          } else {
            key += a.phrase;
          }
        }
        // Cells with the same text in several rows are one reading.
        if (!seen.insert(key).second) return;
        std::sort(item.tokens.begin(), item.tokens.end());
        item.first = item.tokens.front();
        items.push_back(std::move(item));
        return;
      }
      for (std::size_t i = 0; i < anns.size(); ++i) {
        if (!symbol_matches(rule.symbols[pos], symbols[i])) continue;
        if (filters && anns[i].is_entity() && ref_of(anns[i]).kind == KbRef::Kind::kHeading &&
            overlaps_headword(anns[i], aq)) {
          continue;
        }
        bool ok = true;
        for (auto j : chosen) ok = ok && j != i && disjoint(anns[i], anns[j]);
        if (!ok) continue;
        if (!rule.floating && pos > 0 && !only_stopwords_between(anns[chosen.back()], anns[i])) {
          continue;
        }
        chosen.push_back(i);
        self(self);
        chosen.pop_back();
      }
    };
    extend(extend);
  }
  return items;
}

}  // namespace

Grammar Grammar::parse(std::string_view text) {
  Grammar g;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::set<std::string> ids;
  while (std::getline(in, raw)) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    GrammarRule rule;
    auto colon = line.find(':');
    auto arrow = line.find("=>");
    if (colon == std::string::npos || arrow == std::string::npos || arrow < colon) {
      fail(line, "expected 'id: SYMBOLS => actions mode'");
    }
    rule.id = trim(line.substr(0, colon));
    if (rule.id.empty() || !ids.insert(rule.id).second) fail(line, "missing or duplicate rule id");
    std::istringstream syms(line.substr(colon + 1, arrow - colon - 1));
    for (std::string s; syms >> s;) rule.symbols.push_back(s);
    if (rule.symbols.empty()) fail(line, "rule without symbols");
    std::string rest = trim(line.substr(arrow + 2));
    auto space = rest.find_last_of(" \t");
    if (space == std::string::npos) fail(line, "missing floating/ordered flag");
    const std::string mode = rest.substr(space + 1);
    if (mode != "floating" && mode != "ordered") fail(line, "mode must be floating or ordered");
    rule.floating = mode == "floating";
    for (const auto& part : split(rest.substr(0, space), ';')) {
      if (!trim(part).empty()) rule.actions.push_back(parse_action(trim(part), line));
    }
    validate(rule, line);
    g.rules_.push_back(std::move(rule));
  }
  return g;
}

Grammar Grammar::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GrammarError("cannot read grammar file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<std::string> annotation_symbols(const Annotation& a, const ComprehendedTable& table) {
  if (const auto* e = std::get_if<EntityTarget>(&a.target)) {
    const auto* col = table.find(e->ref.column);
    if (!col) return {};
    if (e->ref.kind == KbRef::Kind::kCell) {
      if (col->role == ColumnRole::kDimension) return {"CELL"};
      return {};
    }
    switch (col->role) {
      case ColumnRole::kDimension: return {"DIM"};
      case ColumnRole::kMetric: return {"MET"};
      case ColumnRole::kDate:
      case ColumnRole::kTime: return {"DATE"};
    }
  }
  if (const auto* i = std::get_if<IntentTarget>(&a.target)) return {i->intent};
  if (a.is_number()) return {"NUMBER"};
  return {"PLACEHOLDER"};
}

bool symbol_matches(std::string_view rule_symbol, const std::vector<std::string>& symbols) {
  for (const auto& s : symbols) {
    if (!rule_symbol.empty() && rule_symbol.back() == '*') {
      auto prefix = rule_symbol.substr(0, rule_symbol.size() - 1);
      if (is_intent_symbol(s) && s.rfind(prefix, 0) == 0) return true;
    } else if (s == rule_symbol) {
      return true;
    }
  }
  return false;
}

std::vector<SemanticParse> parse_candidates(const AnnotatedQuery& aq,
                                            const ComprehendedTable& table,
                                            const Grammar& grammar, const ScoreWeights& weights,
                                            const ParserOptions& options) {
  if (aq.annotations.empty()) return {};
  const std::vector<Item> items = match_items(aq, table, grammar);
  const std::size_t n = aq.tokens.size();

  struct Partial {
    std::vector<std::size_t> items;
    std::vector<bool> covered;
    double score = 0.0;
  };
  auto partial_score = [&](const Partial& p) {
    std::vector<int> ids;
    for (auto i : p.items) ids.insert(ids.end(), items[i].annotations.begin(), items[i].annotations.end());
    return score_annotations(ids, aq, weights).total;
  };

  std::vector<Partial> beam{Partial{{}, std::vector<bool>(n, false), 0.0}};
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::size_t> starting;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].first == t) starting.push_back(i);
    }
    if (starting.empty()) continue;
    std::vector<Partial> next;
    for (const auto& p : beam) {
      bool extended = false;
      for (auto i : starting) {
        const Item& item = items[i];
        bool free = std::none_of(item.tokens.begin(), item.tokens.end(),
                                 [&](std::size_t tok) { return p.covered[tok]; });
        if (!free) continue;
        Partial q = p;
        q.items.push_back(i);
        for (auto tok : item.tokens) q.covered[tok] = true;
        q.score = partial_score(q);
        next.push_back(std::move(q));
        extended = true;
      }
      if (!extended) next.push_back(p);
    }
    if (next.size() > options.max_candidates) {
      std::stable_sort(next.begin(), next.end(),
                       [](const Partial& a, const Partial& b) { return a.score > b.score; });
      next.resize(options.max_candidates);
    }
    beam = std::move(next);
  }

  CandidateBuilder builder(aq, table);
  std::vector<SemanticParse> built;
  for (const auto& p : beam) {
    std::vector<const Item*> chosen;
    for (auto i : p.items) chosen.push_back(&items[i]);
    builder.build(chosen, built);
  }

  // Structural dedup, keeping the first (highest coverage) provenance seen.
  std::map<std::string, SemanticParse> unique;
  for (auto& c : built) {
    auto key = structural_key(c);
    auto it = unique.find(key);
    if (it == unique.end()) {
      unique.emplace(std::move(key), std::move(c));
    } else if (score(c, aq, weights).total > score(it->second, aq, weights).total) {
      it->second = std::move(c);
    }
  }
  std::vector<SemanticParse> out;
  for (auto& [key, c] : unique) {
    if (!c.provenance.empty()) out.push_back(std::move(c));
  }
  if (out.empty()) out.push_back(SemanticParse{});  // annotations, but nothing the grammar uses
  if (out.size() > options.max_candidates) {
    std::stable_sort(out.begin(), out.end(), [&](const SemanticParse& a, const SemanticParse& b) {
      return score(a, aq, weights).total > score(b, aq, weights).total;
    });
    out.resize(options.max_candidates);
  }
  std::stable_sort(out.begin(), out.end(), [](const SemanticParse& a, const SemanticParse& b) {
    auto ha = structural_hash(a), hb = structural_hash(b);
    if (ha != hb) return ha < hb;
    return structural_key(a) < structural_key(b);
  });
  return out;
}

double candidate_stats(const std::vector<std::size_t>& candidate_counts) {
  if (candidate_counts.empty()) return 0.0;
  double sum = 0.0;
  for (auto c : candidate_counts) sum += static_cast<double>(c);
  return sum / static_cast<double>(candidate_counts.size());
}

double candidate_stats(const std::vector<std::vector<SemanticParse>>& parses) {
  std::vector<std::size_t> counts;
  for (const auto& p : parses) counts.push_back(p.size());
  return candidate_stats(counts);
}

}  // namespace tabqa
