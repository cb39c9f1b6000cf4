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

#include <algorithm>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.h"
#include "tabqa/answer_match.h"
#include "tabqa/engine.h"

namespace tabqa {
namespace {

using testing::FixtureTables;
using testing::fixture_config;
using testing::fixture_model;

constexpr const char* kRunning = "In what movie was Barton also the producer?";

TEST(Engine, RunningExampleWithLearntAbduction) {
  Engine engine(fixture_config(AbductionMode::kMl), fixture_model());
  FixtureTables tables(engine);
  EngineResult r = engine.answer(kRunning, tables.get("barton"));

  EXPECT_EQ(r.answer.texts(), (std::vector<std::string>{"Homecoming"}));
  EXPECT_TRUE(r.abduction_used);
  const Interpretation& i = r.interpretation;
  EXPECT_EQ(i.type, QuestionType::kLookup);
  EXPECT_EQ(i.rewritten, "In what [title] was Barton also the producer?");
  EXPECT_TRUE(i.doubt);
  EXPECT_EQ(i.message, "We think you meant: In what [title] was Barton also the producer?");

  ASSERT_EQ(i.fills.size(), 1u);
  EXPECT_EQ(i.fills[0].heading, "Title");
  EXPECT_EQ(i.fills[0].provenance, ProvenanceKind::kMachineLearntAbductive);
  EXPECT_GT(i.fills[0].confidence, 0.25);
  EXPECT_EQ(i.fills[0].placeholder_token, 2u);

  ASSERT_EQ(i.terms.size(), 8u);
  const TermEntry& movie = i.terms[2];
  EXPECT_TRUE(movie.matched);
  EXPECT_EQ(movie.provenance, ProvenanceKind::kMachineLearntAbductive);
  EXPECT_EQ(movie.target, "heading Title");
  ASSERT_TRUE(movie.confidence);
  const TermEntry& producer = i.terms[7];
  EXPECT_EQ(producer.provenance, ProvenanceKind::kExactSyntactic);
  EXPECT_EQ(producer.kind, MatchKind::kExact);
  EXPECT_EQ(producer.target, "cell Notes[12] = Also producer");
  EXPECT_FALSE(i.terms[4].matched);  // barton
  EXPECT_TRUE(i.terms[0].stopword);

  ASSERT_EQ(r.answer.provenance.size(), 1u);
  EXPECT_EQ(r.answer.provenance[0], (CellRef{"c1", 12}));
  EXPECT_NE(i.sql.find("\"Title\""), std::string::npos);
  EXPECT_EQ(std::count_if(r.candidates.begin(), r.candidates.end(),
                          [](const CandidateView& c) { return c.chosen; }),
            1);
}

TEST(Engine, BaselineAbductionIsRuleBased) {
  Engine engine(fixture_config(AbductionMode::kBaseline));
  FixtureTables tables(engine);
  EngineResult r = engine.answer(kRunning, tables.get("barton"));
  EXPECT_EQ(r.answer.texts(), (std::vector<std::string>{"Homecoming"}));
  ASSERT_EQ(r.interpretation.fills.size(), 1u);
  EXPECT_EQ(r.interpretation.fills[0].provenance, ProvenanceKind::kRuleBasedAbductive);
  EXPECT_DOUBLE_EQ(r.interpretation.fills[0].confidence, 0.25);
}

TEST(Engine, AbductionOffLeavesTheQuestionUnanswered) {
  Engine engine(fixture_config(AbductionMode::kOff));
  FixtureTables tables(engine);
  EngineResult r = engine.answer(kRunning, tables.get("barton"));
  EXPECT_TRUE(r.answer.is_none());
  EXPECT_FALSE(r.abduction_used);
  EXPECT_TRUE(r.interpretation.fills.empty());
  EXPECT_TRUE(r.interpretation.doubt);
  EXPECT_FALSE(r.interpretation.diagnostics.empty());
  EXPECT_FALSE(r.interpretation.terms[2].matched);
  EXPECT_EQ(r.interpretation.rewritten, kRunning);
  for (const auto& c : r.candidates) EXPECT_FALSE(c.chosen);
  EXPECT_EQ(r.candidates.front().status, "incomplete");
}

TEST(Engine, ExactMatchesCarryNoDoubt) {
  Engine engine(fixture_config(AbductionMode::kMl), fixture_model());
  FixtureTables tables(engine);
  EngineResult r = engine.answer("what role did she play in homecoming", tables.get("barton"));
  EXPECT_EQ(r.answer.texts(), (std::vector<std::string>{"Shelby Mercer"}));
  EXPECT_FALSE(r.interpretation.doubt);
  EXPECT_TRUE(r.interpretation.message.empty());
  EXPECT_EQ(r.interpretation.rewritten, "what role did she play in homecoming");
}

TEST(Engine, SpellingCorrectionIsShownAsDoubt) {
  Engine engine(fixture_config(AbductionMode::kMl), fixture_model());
  FixtureTables tables(engine);
  EngineResult r = engine.answer("which nattion won the most gold", tables.get("medals"));
  EXPECT_EQ(r.answer.texts(), (std::vector<std::string>{"Brazil"}));
  EXPECT_TRUE(r.interpretation.doubt);
  EXPECT_EQ(r.interpretation.rewritten, "which [nation] won the most gold");
  EXPECT_EQ(r.interpretation.terms[1].kind, MatchKind::kSpellCorrected);
  EXPECT_EQ(r.interpretation.terms[1].provenance, ProvenanceKind::kApproximateSyntactic);
}

TEST(Engine, YearRangeQuestion) {
  Engine engine(fixture_config(AbductionMode::kBaseline));
  FixtureTables tables(engine);
  EngineResult r = engine.answer("how many films did barton make after 2005", tables.get("barton"));
  EXPECT_EQ(r.answer.texts(), (std::vector<std::string>{"6"}));
}

TEST(Engine, ConfigurationErrors) {
  EngineConfig bad_dir = fixture_config(AbductionMode::kOff);
  bad_dir.data_dir = "/nonexistent/tabqa";
  EXPECT_THROW(Engine{bad_dir}, ConfigError);

  EngineConfig no_model = fixture_config(AbductionMode::kMl);
  no_model.model = "/nonexistent/model.tqpm";
  EXPECT_THROW(Engine{no_model}, ConfigError);
}

TEST(Engine, AnswersAreReproducibleAcrossThreads) {
  Engine engine(fixture_config(AbductionMode::kMl), fixture_model());
  FixtureTables tables(engine);
  const auto cases = testing::load_regression();
  std::vector<const PreparedTable*> prepared;
  std::vector<std::vector<std::string>> expected;
  for (const auto& rc : cases) {
    prepared.push_back(&tables.get(rc.table));
    expected.push_back(engine.answer(rc.question, *prepared.back()).answer.texts());
  }
  std::vector<int> mismatches(4, 0);
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t k = 0; k < cases.size(); ++k) {
        if (engine.answer(cases[k].question, *prepared[k]).answer.texts() != expected[k]) {
          ++mismatches[static_cast<std::size_t>(w)];
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (int m : mismatches) EXPECT_EQ(m, 0);
}

// Every term appears exactly once, in order; doubt is raised exactly when a
// non-exact match (approximate or abductive) was used.
TEST(Transparency, RegressionQuestions) {
  Engine engine(fixture_config(AbductionMode::kMl), fixture_model());
  FixtureTables tables(engine);
  for (const auto& rc : testing::load_regression()) {
    EngineResult r = engine.answer(rc.question, tables.get(rc.table));
    const Interpretation& i = r.interpretation;
    ASSERT_EQ(i.terms.size(), r.annotated.tokens.size()) << rc.question;
    bool non_exact = false;
    for (std::size_t k = 0; k < i.terms.size(); ++k) {
      const TermEntry& t = i.terms[k];
      EXPECT_EQ(t.token, k);
      EXPECT_EQ(t.term, r.annotated.tokens[k].text);
      EXPECT_EQ(t.matched, t.provenance.has_value()) << rc.question;
      if (t.matched) {
        EXPECT_FALSE(t.target.empty());
        non_exact |= *t.provenance != ProvenanceKind::kExactSyntactic;
      }
    }
    non_exact |= !i.fills.empty();
    EXPECT_EQ(i.doubt, non_exact) << rc.question;
    EXPECT_EQ(!i.message.empty(), i.doubt) << rc.question;
  }
}

}  // namespace
}  // namespace tabqa
