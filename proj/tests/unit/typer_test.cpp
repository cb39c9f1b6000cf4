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

#include <memory>
#include <string>
#include <vector>

#include "fixtures.h"
#include "tabqa/question_typer.h"

namespace tabqa {
namespace {

using testing::FixtureTables;
using testing::fixture_config;

// The type table, transcribed by hand: dimensions, metrics, filters, any.
TEST(RequiredOperands, TypeTableVerbatim) {
  const std::vector<std::pair<QuestionType, OperandRequirement>> table = {
      {QuestionType::kSortDim, {1, 1, 0, 0}},    {QuestionType::kSortMet, {0, 1, 0, 0}},
      {QuestionType::kFirstLast, {1, 0, 0, 0}},  {QuestionType::kBefAfter, {0, 0, 1, 0}},
      {QuestionType::kSameValue, {2, 0, 1, 0}},  {QuestionType::kPosBoth, {1, 0, 2, 0}},
      {QuestionType::kAOrB, {0, 0, 2, 0}},       {QuestionType::kDifference, {0, 1, 2, 0}},
      {QuestionType::kHowMany, {0, 1, 0, 0}},    {QuestionType::kLookup, {1, 0, 1, 0}},
      {QuestionType::kOtherType, {0, 0, 0, 1}},
  };
  ASSERT_EQ(table.size(), static_cast<std::size_t>(kQuestionTypeCount));
  ASSERT_EQ(all_question_types().size(), table.size());
  for (const auto& [type, req] : table) {
    EXPECT_EQ(required_operands(type), req) << question_type_name(type);
  }
}

TEST(QuestionTypeNames, RoundTrip) {
  for (QuestionType t : all_question_types()) {
    auto back = question_type_from_name(question_type_name(t));
    ASSERT_TRUE(back);
    EXPECT_EQ(*back, t);
  }
  EXPECT_EQ(question_type_name(QuestionType::kOtherType), "OTHER_TYPE");
  EXPECT_FALSE(question_type_from_name("MAYBE"));
}

class TyperTest : public ::testing::Test {
 protected:
  TyperTest() : engine_(fixture_config(AbductionMode::kOff)), tables_(engine_) {}

  QuestionType top_type(const PreparedTable& t, const std::string& question) {
    AnnotatedQuery aq = annotate(question, t.index(), engine_.lexicon());
    auto ranked = engine_.candidates(aq, t.table());
    EXPECT_FALSE(ranked.empty()) << question;
    return ranked.empty() ? QuestionType::kOtherType : *ranked.front().parse.question_type;
  }

  std::shared_ptr<const PreparedTable> inline_table(std::vector<std::string> header,
                                                    std::vector<std::vector<std::string>> rows) {
    RawTable raw;
    raw.name = "inline";
    raw.header = std::move(header);
    raw.rows = std::move(rows);
    return engine_.prepare(raw);
  }

  Engine engine_;
  FixtureTables tables_;
};

TEST_F(TyperTest, TypeTableExamples) {
  auto movies = inline_table({"Title", "Budget", "Year"}, {{"Top Gun", "15", "1986"},
                                                          {"Rain Man", "25", "1988"},
                                                          {"Cocktail", "20", "1988"}});
  EXPECT_EQ(top_type(*movies, "which movie has the most budget?"), QuestionType::kSortDim);

  auto awards = inline_table({"Year", "Actor", "Film"}, {{"1988", "Tom Hanks", "Big"},
                                                         {"1989", "Tom Cruise", "Rain Man"},
                                                         {"1990", "Kevin Costner", "Dances"}});
  EXPECT_EQ(top_type(*awards, "Actor who won before Tom Cruise"), QuestionType::kBefAfter);

  EXPECT_EQ(top_type(tables_.get("cities"), "how many cities with population more than 200000"),
            QuestionType::kHowMany);
  EXPECT_EQ(top_type(tables_.get("medals"), "is peru ranked higher than chile"),
            QuestionType::kOtherType);
  EXPECT_EQ(top_type(tables_.get("games"), "what was the highest attendance"),
            QuestionType::kSortMet);
  EXPECT_EQ(top_type(tables_.get("worldcup"), "who has 4 titles, germany or brazil?"),
            QuestionType::kAOrB);
}

TEST_F(TyperTest, RunningExampleMissesTheAnswerColumn) {
  const PreparedTable& t = tables_.get("barton");
  AnnotatedQuery aq =
      annotate("in what movie was barton also the producer?", t.index(), engine_.lexicon());
  auto ranked = engine_.candidates(aq, t.table());
  ASSERT_FALSE(ranked.empty());
  const SemanticParse& p = ranked.front().parse;
  ASSERT_EQ(*p.question_type, QuestionType::kLookup);
  MissingOperandReport r = find_missing(p, QuestionType::kLookup, aq);
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0].kind, SlotKind::kDimension);
  EXPECT_EQ(r.missing[0].count, 1);
  EXPECT_TRUE(r.missing[0].target);
  EXPECT_EQ(r.missing_columns(), 1);
  EXPECT_EQ(r.missing_filters(), 0);
  EXPECT_NE(std::find(r.terms.begin(), r.terms.end(), "movie"), r.terms.end());
}

TEST(FindMissing, ArithmeticOnRequirements) {
  AnnotatedQuery aq;
  SemanticParse p;
  p.dimensions.push_back({"c0", {}, true, std::nullopt});
  p.filters.push_back({DimensionEquals{"c1", "x", -1}, {}});

  // SAME_VALUE with only the answer column: one more dimension needed.
  auto r = find_missing(p, QuestionType::kSameValue, aq);
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0].kind, SlotKind::kDimension);
  EXPECT_FALSE(r.missing[0].target);

  p.dimensions.push_back({"c2", {}, false, std::nullopt});
  EXPECT_TRUE(find_missing(p, QuestionType::kSameValue, aq).complete());
  EXPECT_TRUE(find_missing(p, QuestionType::kLookup, aq).complete());

  // DIFFERENCE: a metric and two filters.
  r = find_missing(p, QuestionType::kDifference, aq);
  EXPECT_EQ(r.missing_columns(), 1);
  EXPECT_EQ(r.missing_filters(), 1);

  SemanticParse empty;
  r = find_missing(empty, QuestionType::kOtherType, aq);
  ASSERT_EQ(r.missing.size(), 1u);
  EXPECT_EQ(r.missing[0].kind, SlotKind::kAnyColumn);
}

TEST(AnswerKind, PerType) {
  EXPECT_EQ(answer_kind_for(QuestionType::kHowMany, false, AnswerKind::kCell), AnswerKind::kNumber);
  EXPECT_EQ(answer_kind_for(QuestionType::kDifference, false, AnswerKind::kCell),
            AnswerKind::kNumber);
  EXPECT_EQ(answer_kind_for(QuestionType::kSortMet, false, AnswerKind::kCell), AnswerKind::kNumber);
  EXPECT_EQ(answer_kind_for(QuestionType::kLookup, true, AnswerKind::kCell), AnswerKind::kList);
  EXPECT_EQ(answer_kind_for(QuestionType::kLookup, false, AnswerKind::kCell), AnswerKind::kCell);
  EXPECT_EQ(answer_kind_for(QuestionType::kOtherType, false, AnswerKind::kBoolean),
            AnswerKind::kBoolean);
}

// Classification relies on filters and intents, not on identified columns:
// dropping dimension operands from a parse never changes its type.
TEST_F(TyperTest, TypeIsIndependentOfDimensions) {
  for (const auto& rc : testing::load_regression()) {
    const PreparedTable& t = tables_.get(rc.table);
    AnnotatedQuery aq = annotate(rc.question, t.index(), engine_.lexicon());
    for (const auto& c : engine_.candidates(aq, t.table())) {
      SemanticParse stripped = c.parse;
      stripped.dimensions.clear();
      EXPECT_EQ(classify(aq, stripped), classify(aq, c.parse)) << rc.question;
    }
  }
}

TEST_F(TyperTest, CompleteIffNoMissingSlots) {
  for (const auto& rc : testing::load_regression()) {
    const PreparedTable& t = tables_.get(rc.table);
    AnnotatedQuery aq = annotate(rc.question, t.index(), engine_.lexicon());
    for (const auto& c : engine_.candidates(aq, t.table())) {
      auto r = find_missing(c.parse, *c.parse.question_type, aq);
      EXPECT_EQ(r.complete(), r.missing_columns() == 0 && r.missing_filters() == 0);
      for (const auto& m : r.missing) EXPECT_GT(m.count, 0);
      // A complete parse always plans.
      if (r.complete()) {
        EXPECT_NO_THROW(build_plan(c.parse, t.table())) << rc.question << " "
                                                        << structural_key(c.parse);
      }
    }
  }
}

TEST(YesNo, AuxiliaryOpeners) {
  AnnotatedQuery aq;
  aq.tokens = tokenize("Is Peru ranked higher than Chile?");
  EXPECT_TRUE(is_yes_no_question(aq));
  aq.tokens = tokenize("which nation ranked higher");
  EXPECT_FALSE(is_yes_no_question(aq));
}

}  // namespace
}  // namespace tabqa
