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

#include <set>
#include <string>

#include "fixtures.h"
#include "tabqa/answer_match.h"
#include "tabqa/text.h"

namespace tabqa {
namespace {

using testing::RegressionCase;

class Regression : public ::testing::TestWithParam<RegressionCase> {};

TEST_P(Regression, AnswerAndType) {
  static const Engine engine(testing::fixture_config(AbductionMode::kMl), testing::fixture_model());
  static testing::FixtureTables tables(engine);
  const RegressionCase& rc = GetParam();
  EngineResult r = engine.answer(rc.question, tables.get(rc.table));
  EXPECT_TRUE(answer_match(r.answer, rc.gold))
      << rc.question << "\n  got [" << join(r.answer.texts(), " | ") << "] want ["
      << join(rc.gold, " | ") << "]";
  ASSERT_TRUE(r.interpretation.type) << rc.question;
  EXPECT_EQ(question_type_name(*r.interpretation.type), question_type_name(rc.type)) << rc.question;
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Regression, ::testing::ValuesIn(testing::load_regression()),
                         [](const ::testing::TestParamInfo<RegressionCase>& info) {
                           return std::to_string(info.index) + "_" + info.param.table;
                         });

TEST(RegressionSuite, SpansAllTypes) {
  std::set<QuestionType> seen;
  for (const auto& rc : testing::load_regression()) seen.insert(rc.type);
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(kQuestionTypeCount));
  EXPECT_EQ(testing::load_regression().size(), 50u);
}

}  // namespace
}  // namespace tabqa
