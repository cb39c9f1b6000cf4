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

#include "checks.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.h"
#include "tabqa/answer_match.h"
#include "tabqa/query.h"

namespace tabqa::testing {

namespace {

const std::vector<std::string> kWords = {"movie", "title", "film", "year", "who",
                                         "name", "team", "nation", "city", "role"};

}  // namespace

GradientCheck check_gradients(Gen& g, std::size_t instances) {
  constexpr double kStep = 1e-5;
  GradientCheck out;
  for (std::size_t n = 0; n < instances; ++n) {
    TrainingExample ex;
    for (std::size_t k = 1 + g.below(3); k > 0; --k) ex.terms.push_back(g.pick(kWords));
    for (std::size_t k = 2 + g.below(4); k > 0; --k) {
      std::string heading = g.pick(kWords);
      if (g.chance(0.3)) heading += " " + g.pick(kWords);
      ex.columns.push_back(heading);
    }
    ex.correct = g.below(ex.columns.size());

    Embeddings e;
    for (const auto& w : kWords) {
      if (g.chance(0.2)) continue;  // leave some terms out of vocabulary
      std::vector<double> v(kEmbeddingDim);
      for (auto& x : v) x = (static_cast<double>(g.below(2001)) - 1000.0) / 2000.0;
      e[embedding_terms(w).front()] = v;
    }

    Embeddings grad;
    const double loss = example_loss_and_gradient(ex, e, grad);
    if (std::fabs(loss - example_loss(ex, e)) > 1e-12) {
      out.worst_relative_error = 1.0;
      out.worst = "loss mismatch between the two entry points";
      return out;
    }
    for (auto& [term, vec] : e) {
      for (std::size_t k = 0; k < kEmbeddingDim; ++k) {
        const double saved = vec[k];
        vec[k] = saved + kStep;
        const double up = example_loss(ex, e);
        vec[k] = saved - kStep;
        const double down = example_loss(ex, e);
        vec[k] = saved;
        const double numeric = (up - down) / (2 * kStep);
        auto it = grad.find(term);
        const double analytic = it == grad.end() ? 0.0 : it->second[k];
        const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
        const double rel = std::fabs(analytic - numeric) / scale;
        ++out.coordinates;
        if (rel > out.worst_relative_error) {
          out.worst_relative_error = rel;
          std::ostringstream d;
          d << "instance " << n << " term " << term << "[" << k << "] analytic " << analytic
            << " numeric " << numeric;
          out.worst = d.str();
        }
      }
    }
  }
  return out;
}

Learnability check_learnability(std::uint64_t seed, std::size_t n, std::size_t pairs) {
  Gen g(seed);
  const auto corpus = planted_corpus(g, n, pairs);
  const auto fresh = planted_corpus(g, n, pairs);
  const PredictorModel model = train(corpus);
  Learnability out;
  out.reported_heldout = model.report.heldout_accuracy;
  std::size_t right = 0, baseline = 0;
  for (const auto& ex : fresh) {
    right += predict(model, ex.terms, ex.columns).argmax == ex.correct;
    baseline += ex.baseline == ex.correct;
  }
  out.model_accuracy = static_cast<double>(right) / static_cast<double>(fresh.size());
  out.baseline_accuracy = static_cast<double>(baseline) / static_cast<double>(fresh.size());
  return out;
}

Soundness check_generation(const std::vector<CorpusItem>& corpus) {
  Soundness out;
  for (const auto& item : corpus) {
    const auto emitted = generate_training_data({item});
    if (emitted.empty()) continue;
    ++out.emitted;
    const TrainingExample& ex = emitted.front();
    auto fail = [&](const std::string& why) {
      ++out.violations;
      out.details.push_back(item.aq.question + ": " + why);
    };
    if (emitted.size() != 1) {
      fail("more than one example for one question");
      continue;
    }

    const QuestionType type = *item.parse.question_type;
    const MissingOperandReport report = find_missing(item.parse, type, item.aq);
    std::vector<const MissingSlot*> slots;
    for (const auto& m : report.missing) {
      if (m.kind != SlotKind::kFilter) slots.push_back(&m);
    }
    if (slots.size() != 1 || slots.front()->count != 1 || report.missing_filters() != 0) {
      fail("example emitted for a parse without exactly one missing column");
      continue;
    }
    const auto pool = eligible_columns(item.parse, *slots.front(), *item.table);
    if (pool.size() != ex.columns.size()) {
      fail("column list does not match the eligible columns");
      continue;
    }
    std::vector<std::size_t> reproduce;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i]->name != ex.columns[i]) fail("heading mismatch at " + std::to_string(i));
      SemanticParse filled = fill_slot(item.parse, *slots.front(), *pool[i], AbductionFill{});
      filled.question_type = type;
      try {
        const QueryPlan plan = build_plan(filled, *item.table);
        ExecutionResult run;
        run.values = oracle_execute(plan, *item.table);
        if (answer_match(normalize_answer(run, type, item.aq.headword_plural()), item.gold)) {
          reproduce.push_back(i);
        }
      } catch (const PlanError&) {
      }
    }
    if (reproduce.size() != 1) {
      fail(std::to_string(reproduce.size()) + " columns reproduce the gold answer");
    } else if (reproduce.front() != ex.correct) {
      fail("recorded column " + std::to_string(ex.correct) + " but column " +
           std::to_string(reproduce.front()) + " reproduces gold");
    }
    if (ex.terms != report.terms) fail("terms differ from the abduction input");
  }
  return out;
}

}  // namespace tabqa::testing
