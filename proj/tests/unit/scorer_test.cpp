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
#include <string>

#include "fixtures.h"
#include "tabqa/scorer.h"

namespace tabqa {
namespace {

using testing::FixtureTables;
using testing::fixture_config;

TEST(Weights, ParseAndLookup) {
  ScoreWeights w = ScoreWeights::parse("# comment\ncoverage\t3\ncell\t0.1\n");
  EXPECT_DOUBLE_EQ(w["coverage"], 3.0);
  EXPECT_DOUBLE_EQ(w["cell"], 0.1);
  EXPECT_DOUBLE_EQ(w["exact"], 1.0);  // untouched default
  EXPECT_THROW(ScoreWeights::parse("charisma\t1\n"), std::exception);
  EXPECT_THROW(ScoreWeights::parse("coverage\tlots\n"), std::exception);
}

TEST(Weights, ShippedFileMatchesDefaults) {
  ScoreWeights w = ScoreWeights::load(std::string(TABQA_DATA_DIR) + "/weights.tsv");
  EXPECT_EQ(w.values, ScoreWeights{}.values);
}

class ScorerTest : public ::testing::Test {
 protected:
  ScorerTest() : engine_(fixture_config(AbductionMode::kOff)), tables_(engine_) {}
  Engine engine_;
  FixtureTables tables_;
};

// Running example, hand-counted: "movie" (placeholder), "also" and "producer"
// are covered non-stopwords; the cell match is exact.
TEST_F(ScorerTest, RunningExampleBreakdown) {
  const PreparedTable& t = tables_.get("barton");
  AnnotatedQuery aq =
      annotate("In what movie was Barton also the producer?", t.index(), engine_.lexicon());
  auto ranked = engine_.candidates(aq, t.table());
  ASSERT_FALSE(ranked.empty());
  const ScoreBreakdown& s = ranked.front().score;
  EXPECT_EQ(s.annotated_words, 3);
  EXPECT_EQ(s.exact_matches, 1);
  EXPECT_EQ(s.approximate_matches, 0);
  EXPECT_EQ(s.header_matches, 0);
  EXPECT_EQ(s.cell_matches, 1);
  EXPECT_NEAR(s.total, 10.0 * 3 + 1.0 * 1 + 0.4 * 1, 1e-9);
}

TEST_F(ScorerTest, TotalIsWeightedSumAndRankingIsStable) {
  ScoreWeights weights;
  for (const auto& rc : testing::load_regression()) {
    const PreparedTable& t = tables_.get(rc.table);
    AnnotatedQuery aq = annotate(rc.question, t.index(), engine_.lexicon());
    auto cands = parse_candidates(aq, t.table(), engine_.grammar(), weights);
    auto ranked = rank(cands, aq, weights);
    ASSERT_EQ(ranked.size(), cands.size());
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      const auto& s = ranked[k].score;
      const auto f = s.features();
      double expected = 0.0;
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        expected += weights.values[i] * f[i];
        EXPECT_NEAR(s.contributions[i], weights.values[i] * f[i], 1e-12);
      }
      EXPECT_NEAR(s.total, expected, 1e-9) << rc.question;
      EXPECT_GE(s.annotated_words, 0);
      EXPECT_LE(s.annotated_words, static_cast<int>(aq.tokens.size()));
      if (k > 0) EXPECT_GE(ranked[k - 1].score.total, s.total);
    }
    // Stability: equal totals keep the parser's order.
    for (std::size_t k = 1; k < ranked.size(); ++k) {
      if (ranked[k - 1].score.total != ranked[k].score.total) continue;
      auto pos = [&](const SemanticParse& p) {
        for (std::size_t i = 0; i < cands.size(); ++i) {
          if (structural_key(cands[i]) == structural_key(p)) return i;
        }
        return cands.size();
      };
      EXPECT_LT(pos(ranked[k - 1].parse), pos(ranked[k].parse));
    }
  }
}

TEST_F(ScorerTest, CoverageDominates) {
  // One more covered word outweighs any realistic combination of the others.
  ScoreWeights w;
  EXPECT_GT(w["coverage"], 2 * (w["exact"] + w["header"] + w["cell"]));
}

}  // namespace
}  // namespace tabqa
