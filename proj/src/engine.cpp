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

#include "tabqa/engine.h"

#include <algorithm>
#include <map>

#include "tabqa/text.h"

namespace tabqa {

PreparedTable::PreparedTable(const RawTable& raw, const Lexicon& lexicon,
                             const RecognizerConfig& recognizers)
    : table_(comprehend(raw, recognizers)),
      kb_(build_knowledge_base(table_)),
      index_(std::make_unique<MatchIndex>(kb_, lexicon)) {}

std::shared_ptr<const PreparedTable> prepare_table(const RawTable& raw, const Lexicon& lexicon,
                                                   const RecognizerConfig& recognizers) {
  return std::make_shared<const PreparedTable>(raw, lexicon, recognizers);
}

namespace {

std::filesystem::path or_default(const std::filesystem::path& p, const std::filesystem::path& dir,
                                 const char* file) {
  return p.empty() ? dir / file : p;
}

int missing_total(const MissingOperandReport& r) {
  int n = 0;
  for (const auto& m : r.missing) n += m.count;
  return n;
}

std::string heading_of(const ComprehendedTable& table, const std::string& column) {
  const auto* c = table.find(column);
  return c ? c->name : column;
}

std::string describe_target(const Annotation& a, const ComprehendedTable& table) {
  if (const auto* e = std::get_if<EntityTarget>(&a.target)) {
    if (e->ref.kind == KbRef::Kind::kHeading) return "heading " + heading_of(table, e->ref.column);
    std::string out = "cell " + heading_of(table, e->ref.column) + "[" +
                      std::to_string(e->ref.row) + "]";
    if (const auto* c = table.find(e->ref.column); c && e->ref.row < c->values.size()) {
      out += " = " + display(c->values[e->ref.row]);
    }
    return out;
  }
  if (const auto* i = std::get_if<IntentTarget>(&a.target)) return "intent " + i->intent;
  if (const auto* n = std::get_if<NumberTarget>(&a.target)) return "number " + format_number(n->value);
  return "placeholder";
}

}  // namespace

Interpretation interpret(const AnnotatedQuery& aq, const ComprehendedTable& table,
                         const SemanticParse* parse) {
  Interpretation out;
  out.question = aq.question;
  for (std::size_t t = 0; t < aq.tokens.size(); ++t) {
    TermEntry e;
    e.token = t;
    e.term = aq.tokens[t].text;
    e.stopword = t < aq.stopword.size() && aq.stopword[t];
    out.terms.push_back(std::move(e));
  }

  // Spans of the rewritten question: token range and replacement text.
  std::map<std::size_t, std::pair<std::size_t, std::string>> rewrites;

  if (parse) {
    out.parse = *parse;
    out.type = parse->question_type;

    std::map<int, const ColumnSlot*> filled_placeholders;
    for (const auto* slots : {&parse->dimensions, &parse->metrics}) {
      for (const auto& s : *slots) {
        if (!s.abduced) continue;
        FillEntry f;
        f.column = s.column;
        f.heading = heading_of(table, s.column);
        f.provenance = s.abduced->kind;
        f.confidence = s.abduced->confidence;
        f.terms = s.abduced->terms;
        if (s.abduced->placeholder >= 0) {
          f.placeholder_token = aq.annotation(s.abduced->placeholder).start;
          filled_placeholders[s.abduced->placeholder] = &s;
        }
        out.fills.push_back(std::move(f));
      }
    }

    std::vector<int> ids = parse->provenance;
    for (const auto& [id, slot] : filled_placeholders) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids) {
      const Annotation& a = aq.annotation(id);
      auto filled = filled_placeholders.find(id);
      if (a.is_placeholder() && filled == filled_placeholders.end()) continue;
      for (std::size_t t = a.start; t < a.start + a.length && t < out.terms.size(); ++t) {
        TermEntry& e = out.terms[t];
        if (e.matched) continue;
        e.matched = true;
        if (filled != filled_placeholders.end()) {
          const ColumnSlot& s = *filled->second;
          e.provenance = s.abduced->kind;
          e.confidence = s.abduced->confidence;
          e.target = "heading " + heading_of(table, s.column);
        } else {
          e.kind = a.kind;
          e.provenance = provenance_of(a.kind);
          e.target = describe_target(a, table);
        }
      }
      if (filled != filled_placeholders.end()) {
        rewrites[a.start] = {a.length, "[" + to_lower(heading_of(table, filled->second->column)) + "]"};
      } else if (a.is_entity() && a.kind != MatchKind::kExact && a.key != a.phrase) {
        rewrites[a.start] = {a.length, "[" + a.key + "]"};
      }
    }
  }

  // Rewrite by byte offsets so the original spacing and punctuation survive.
  std::string rewritten;
  std::size_t cursor = 0;
  for (const auto& [start, rw] : rewrites) {
    const auto& [length, text] = rw;
    const Token& first = aq.tokens[start];
    const Token& last = aq.tokens[start + length - 1];
    if (first.begin < cursor) continue;
    rewritten += aq.question.substr(cursor, first.begin - cursor);
    rewritten += text;
    cursor = last.end;
  }
  rewritten += aq.question.substr(std::min(cursor, aq.question.size()));
  out.rewritten = rewritten;

  out.doubt = !out.fills.empty() ||
              std::any_of(out.terms.begin(), out.terms.end(), [](const TermEntry& e) {
                return e.provenance && *e.provenance != ProvenanceKind::kExactSyntactic;
              });
  if (out.doubt) out.message = "We think you meant: " + out.rewritten;
  return out;
}

Engine::Engine(const EngineConfig& config) : config_(config) { load(nullptr); }

Engine::Engine(const EngineConfig& config, std::shared_ptr<const PredictorModel> model)
    : config_(config) {
  load(std::move(model));
}

void Engine::load(std::shared_ptr<const PredictorModel> model) {
  const auto& dir = config_.data_dir;
  try {
    lexicon_ = Lexicon::load_dir(dir);
    grammar_ = Grammar::load(or_default(config_.grammar, dir, "grammar.txt"));
    weights_ = ScoreWeights::load(or_default(config_.weights, dir, "weights.tsv"));
    recognizers_ = RecognizerConfig::load(or_default(config_.recognizers, dir, "recognizers.txt"));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot load engine resources: ") + e.what());
  }
  if (model) {
    model_ = std::move(model);
  } else if (config_.abduction == AbductionMode::kMl) {
    const auto path = or_default(config_.model, dir, "model.tqpm");
    try {
      model_ = std::make_shared<const PredictorModel>(PredictorModel::load(path));
    } catch (const std::exception& e) {
      throw ConfigError("ml abduction needs a model: " + std::string(e.what()) +
                        " (train one with `tabqa train --out`, or use --abduction baseline)");
    }
  }
}

std::shared_ptr<const PreparedTable> Engine::prepare(const RawTable& raw) const {
  return prepare_table(raw, lexicon_, recognizers_);
}

std::vector<RankedCandidate> Engine::candidates(const AnnotatedQuery& aq,
                                                const ComprehendedTable& table) const {
  auto ranked = rank(parse_candidates(aq, table, grammar_, weights_), aq, weights_);
  std::vector<int> missing;
  for (auto& c : ranked) {
    assign_type(c.parse, aq);
    missing.push_back(missing_total(find_missing(c.parse, *c.parse.question_type, aq)));
  }
  // Among equally scored parses, the one needing fewer guessed operands first.
  std::vector<std::size_t> order(ranked.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = ranked[a].score.total, sb = ranked[b].score.total;
    if (std::abs(sa - sb) > 1e-9) return sa > sb;
    return missing[a] < missing[b];
  });
  std::vector<RankedCandidate> out;
  out.reserve(ranked.size());
  for (auto i : order) out.push_back(std::move(ranked[i]));
  return out;
}

EngineResult Engine::answer(std::string_view question, const PreparedTable& prepared) const {
  const ComprehendedTable& table = prepared.table();
  EngineResult r;
  r.annotated = annotate(question, prepared.index(), lexicon_);
  const AnnotatedQuery& aq = r.annotated;

  const auto ranked = candidates(aq, table);
  for (const auto& c : ranked) {
    r.candidates.push_back(
        {c.parse, c.score, find_missing(c.parse, *c.parse.question_type, aq), false, "not tried"});
  }

  for (auto& view : r.candidates) {
    const QuestionType type = *view.parse.question_type;
    AbductionResult ab = abduct(view.parse, view.missing, model_.get(), table, config_.abduction);
    if (!ab.complete) {
      view.status = "incomplete";
      continue;
    }
    try {
      QueryPlan plan = build_plan(ab.parse, table);
      ExecutionResult ex = execute(plan, table);
      r.answer = normalize_answer(ex, type, aq.headword_plural());
      view.status = "answered";
      view.chosen = true;
      r.abduction_used = ab.fills > 0;
      r.interpretation = interpret(aq, table, &ab.parse);
      r.interpretation.sql = to_sql(plan, table);
      r.interpretation.diagnostics = ex.diagnostics;
      r.plan = std::move(plan);
      return r;
    } catch (const PlanError& e) {
      view.status = std::string("plan error: ") + e.what();
    }
  }

  r.interpretation = interpret(aq, table, ranked.empty() ? nullptr : &ranked.front().parse);
  if (ranked.empty()) {
    r.interpretation.diagnostics.push_back("no candidate parse");
  } else {
    r.interpretation.diagnostics.push_back("no completable candidate parse");
    if (!r.candidates.front().missing.complete()) {
      // A missing operand is itself a reason for doubt.
      r.interpretation.doubt = true;
      r.interpretation.message = "We think you meant: " + r.interpretation.rewritten;
    }
  }
  return r;
}

}  // namespace tabqa
