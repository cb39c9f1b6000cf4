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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "checks.h"
#include "fixtures.h"
#include "tabqa/predictor.h"

namespace tabqa {
namespace {

using testing::Gen;

TEST(EmbeddingTerms, StemmedWords) {
  EXPECT_EQ(embedding_terms("Movies"), (std::vector<std::string>{"movi"}));
  EXPECT_EQ(embedding_terms("Third place"), (std::vector<std::string>{"third", "place"}));
  EXPECT_TRUE(embedding_terms("  ").empty());
}

// Loss by hand for a two-column example in two dimensions of the space.
TEST(Loss, HandComputedSoftmax) {
  Embeddings e;
  std::vector<double> q(kEmbeddingDim, 0.0), a(kEmbeddingDim, 0.0), b(kEmbeddingDim, 0.0);
  q[0] = 1.0;
  a[0] = 2.0;
  b[1] = 1.0;
  e["movi"] = q;
  e["titl"] = a;
  e["role"] = b;
  TrainingExample ex{{"movie"}, {"Title", "Role"}, 0, 1};
  // logits 2 and 0: loss = log(1 + e^-2)
  EXPECT_NEAR(example_loss(ex, e), std::log(1.0 + std::exp(-2.0)), 1e-12);
  ex.correct = 1;
  EXPECT_NEAR(example_loss(ex, e), std::log(1.0 + std::exp(2.0)), 1e-12);

  // Out-of-vocabulary terms contribute nothing: uniform distribution.
  TrainingExample oov{{"zebra"}, {"Title", "Role", "Notes"}, 2, 0};
  EXPECT_NEAR(example_loss(oov, e), std::log(3.0), 1e-12);
}

TEST(Gradient, MatchesFiniteDifferences) {
  Gen g(99);
  auto check = testing::check_gradients(g, 20);
  EXPECT_GT(check.coordinates, 0u);
  EXPECT_LT(check.worst_relative_error, 1e-4) << check.worst;
}

TEST(Training, DeterministicForAFixedSeed) {
  Gen g(1);
  auto corpus = testing::planted_corpus(g, 60, 3);
  TrainingOptions o;
  o.epochs = 30;
  PredictorModel a = train(corpus, o);
  PredictorModel b = train(corpus, o);
  EXPECT_EQ(a.serialize(), b.serialize());
  EXPECT_EQ(a.report.train_size, 42u);  // round(0.7 * 60)
  EXPECT_EQ(a.report.test_size, 18u);
  EXPECT_EQ(a.report.train_loss.size(), 30u);
  EXPECT_EQ(a.report.test_loss.size(), 30u);
  EXPECT_GE(a.report.best_epoch, 0);
  EXPECT_LE(a.report.best_epoch, 30);
  EXPECT_LT(a.report.train_loss.back(), a.report.train_loss.front());
  o.seed = 2;
  EXPECT_NE(train(corpus, o).serialize(), a.serialize());
  EXPECT_THROW(train({}, o), std::invalid_argument);
}

TEST(Training, LearnsPlantedAssociations) {
  auto r = testing::check_learnability(4242, 200, 5);
  EXPECT_GE(r.model_accuracy, 0.95);
  EXPECT_LT(r.baseline_accuracy, r.model_accuracy);
  EXPECT_GE(r.reported_heldout, 0.9);
}

TEST(Serialization, RoundTripIsExact) {
  Gen g(8);
  TrainingOptions o;
  o.epochs = 10;
  PredictorModel m = train(testing::planted_corpus(g, 40, 2), o);
  const std::string bytes = m.serialize();
  PredictorModel back = PredictorModel::deserialize(bytes);
  EXPECT_EQ(back.embeddings(), m.embeddings());
  EXPECT_EQ(back.epochs, m.epochs);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.report.test_loss, m.report.test_loss);
  EXPECT_EQ(back.serialize(), bytes);

  const auto path = std::filesystem::temp_directory_path() / "tabqa_predictor_test.tqpm";
  m.save(path);
  EXPECT_EQ(PredictorModel::load(path).serialize(), bytes);
  std::filesystem::remove(path);

  EXPECT_THROW(PredictorModel::deserialize("XXXX"), std::runtime_error);
  EXPECT_THROW(PredictorModel::deserialize(bytes.substr(0, bytes.size() - 3)), std::runtime_error);
  EXPECT_THROW(PredictorModel::deserialize(bytes + "x"), std::runtime_error);
  EXPECT_THROW(PredictorModel::load("/nonexistent/model.tqpm"), std::runtime_error);
}

TEST(Predict, ProbabilitiesAndOov) {
  Gen g(12);
  TrainingOptions o;
  o.epochs = 50;
  PredictorModel m = train(testing::planted_corpus(g, 100, 2), o);
  Prediction p = predict(m, {"termax"}, {"Notes", "Heading A", "Venue"});
  double sum = 0;
  for (double x : p.probabilities) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-9);
  EXPECT_EQ(p.argmax, 1u);
  EXPECT_DOUBLE_EQ(p.confidence, p.probabilities[1]);
  EXPECT_FALSE(p.all_oov);
  EXPECT_TRUE(predict(m, {"qqqq"}, {"Notes", "Venue"}).all_oov);
  EXPECT_THROW(predict(m, {"termax"}, {}), std::invalid_argument);
}

TEST(Baseline, LeftMostStringColumn) {
  EXPECT_EQ(baseline_leftmost_string(comprehend(testing::fixture_table("barton"))), "c1");
  EXPECT_EQ(baseline_leftmost_string(comprehend(testing::fixture_table("medals"))), "c1");
  EXPECT_EQ(baseline_leftmost_string(comprehend(testing::fixture_table("games"))), "c2");
  RawTable numbers{"n", {"A", "B"}, {{"1", "2"}, {"3", "4"}}, {}};
  EXPECT_THROW(baseline_leftmost_string(comprehend(numbers)), std::invalid_argument);
}

TEST(AbductionMode, Names) {
  for (auto m : {AbductionMode::kMl, AbductionMode::kBaseline, AbductionMode::kOff}) {
    EXPECT_EQ(abduction_mode_from_name(abduction_mode_name(m)), m);
  }
  EXPECT_FALSE(abduction_mode_from_name("oracle"));
}

TEST(Slots, EligibilityAndFill) {
  ComprehendedTable t = comprehend(testing::fixture_table("barton"));
  SemanticParse p;
  p.question_type = QuestionType::kLookup;
  p.filters.push_back({DimensionEquals{"c3", "also producer", 0}, {0}});
  p.holes = {1};
  MissingSlot slot{SlotKind::kDimension, 1, Eligibility::kDimensionColumns, true};

  auto pool = eligible_columns(p, slot, t);
  std::vector<std::string> ids;
  for (const auto* c : pool) ids.push_back(c->id);
  EXPECT_EQ(ids, (std::vector<std::string>{"c0", "c1", "c2", "c3"}));

  SemanticParse filled = fill_slot(p, slot, t.at("c1"), AbductionFill{});
  EXPECT_TRUE(filled.holes.empty());
  ASSERT_EQ(filled.dimensions.size(), 1u);
  EXPECT_TRUE(filled.dimensions[0].target);
  ASSERT_TRUE(filled.dimensions[0].abduced);
  EXPECT_EQ(filled.dimensions[0].abduced->placeholder, 1);
  EXPECT_EQ(projection_column(filled), "c1");

  // A used column is no longer eligible.
  auto rest = eligible_columns(filled, slot, t);
  EXPECT_EQ(rest.size(), 3u);

  MissingSlot any{SlotKind::kMetric, 1, Eligibility::kAnyColumn, true};
  auto any_pool = eligible_columns(p, any, t);
  EXPECT_EQ(any_pool.back()->id, std::string(kRowIdColumn));
  EXPECT_TRUE(eligible_columns(p, MissingSlot{SlotKind::kFilter, 1, Eligibility::kNone, false}, t)
                  .empty());
}

TEST(Abduct, ModesAndProvenance) {
  ComprehendedTable t = comprehend(testing::fixture_table("barton"));
  SemanticParse p;
  p.question_type = QuestionType::kLookup;
  p.filters.push_back({DimensionEquals{"c3", "also producer", 0}, {0}});
  p.holes = {1};
  MissingOperandReport report;
  report.type = QuestionType::kLookup;
  report.missing.push_back({SlotKind::kDimension, 1, Eligibility::kDimensionColumns, true});
  report.terms = {"movie"};

  auto off = abduct(p, report, nullptr, t, AbductionMode::kOff);
  EXPECT_FALSE(off.complete);
  EXPECT_EQ(off.fills, 0);

  auto base = abduct(p, report, nullptr, t, AbductionMode::kBaseline);
  EXPECT_TRUE(base.complete);
  ASSERT_EQ(base.parse.dimensions.size(), 1u);
  EXPECT_EQ(base.parse.dimensions[0].column, "c1");
  EXPECT_EQ(base.parse.dimensions[0].abduced->kind, ProvenanceKind::kRuleBasedAbductive);
  EXPECT_DOUBLE_EQ(base.parse.dimensions[0].abduced->confidence, 0.25);

  // A model that ties "movie" to Role overrides the baseline.
  PredictorModel m;
  std::vector<double> v(kEmbeddingDim, 0.0);
  v[0] = 3.0;
  m.mutable_embeddings()["movi"] = v;
  m.mutable_embeddings()["role"] = v;
  auto ml = abduct(p, report, &m, t, AbductionMode::kMl);
  EXPECT_TRUE(ml.complete);
  EXPECT_EQ(ml.parse.dimensions[0].column, "c2");
  EXPECT_EQ(ml.parse.dimensions[0].abduced->kind, ProvenanceKind::kMachineLearntAbductive);
  EXPECT_GT(ml.parse.dimensions[0].abduced->confidence, 0.5);

  // Every term unknown: fall back to the rule.
  report.terms = {"zebra"};
  auto fallback = abduct(p, report, &m, t, AbductionMode::kMl);
  EXPECT_EQ(fallback.parse.dimensions[0].column, "c1");
  EXPECT_EQ(fallback.parse.dimensions[0].abduced->kind, ProvenanceKind::kRuleBasedAbductive);

  // Missing filters cannot be abduced.
  report.missing.push_back({SlotKind::kFilter, 1, Eligibility::kNone, false});
  EXPECT_FALSE(abduct(p, report, &m, t, AbductionMode::kMl).complete);
}

TEST(Generation, FixtureCorpusIsSound) {
  Engine engine(testing::fixture_config(AbductionMode::kOff));
  testing::FixtureTables tables(engine);
  auto corpus = testing::fixture_corpus(engine, tables);
  ASSERT_FALSE(corpus.empty());
  GenerationStats stats;
  auto data = generate_training_data(corpus, &stats);
  EXPECT_EQ(stats.questions, corpus.size());
  EXPECT_EQ(stats.emitted, data.size());
  EXPECT_EQ(stats.emitted + stats.zero_correct + stats.multi_correct + stats.skipped,
            stats.questions);
  EXPECT_GE(stats.emitted, corpus.size() / 2) << "fixture corpus yields too few examples";
  auto sound = testing::check_generation(corpus);
  EXPECT_EQ(sound.emitted, data.size());
  EXPECT_EQ(sound.violations, 0u) << (sound.details.empty() ? "" : sound.details.front());
  for (const auto& ex : data) {
    EXPECT_LT(ex.correct, ex.columns.size());
    EXPECT_LT(ex.baseline, ex.columns.size());
  }
}

TEST(Generation, ExportFormat) {
  std::vector<TrainingExample> data = {{{"movie", "what"}, {"Year", "Title"}, 1, 1}};
  EXPECT_EQ(export_corpus(data), "movie|what\tYear|Title\t1\n");
}

}  // namespace
}  // namespace tabqa
