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
#include <vector>

#include "oracle.h"
#include "tabqa/answer_match.h"

namespace tabqa {
namespace {

TEST(ValueMatch, TextNumbersAndDates) {
  EXPECT_TRUE(value_match("Homecoming", "homecoming"));
  EXPECT_TRUE(value_match("2,005", "2005"));
  EXPECT_TRUE(value_match("12", "12.0"));
  EXPECT_TRUE(value_match("281332.777777778", "281332.78"));
  EXPECT_TRUE(value_match("September 7, 2008", "2008-09-07"));
  EXPECT_FALSE(value_match("September 7, 2008", "2008-09-08"));
  EXPECT_FALSE(value_match("12", "13"));
  EXPECT_FALSE(value_match("Chile", "Peru"));
}

TEST(AnswerMatch, ListsAreMultisets) {
  EXPECT_TRUE(answer_match(std::vector<std::string>{"a", "b"}, {"b", "a"}));
  EXPECT_FALSE(answer_match(std::vector<std::string>{"a", "a"}, {"a", "b"}));
  EXPECT_FALSE(answer_match(std::vector<std::string>{"a"}, {"a", "b"}));
  EXPECT_FALSE(answer_match(std::vector<std::string>{}, {"a"}));
}

TEST(AnswerMatch, NoneNeverMatches) {
  EXPECT_FALSE(answer_match(Answer{}, {"anything"}));
  Answer yes;
  yes.value = true;
  EXPECT_TRUE(answer_match(yes, {"yes"}));
}

TEST(AnswerMatchProperty, ReflexiveSymmetricAndOrderFree) {
  testing::Gen g(5);
  const std::vector<std::string> pool = {"1,234", "1234", "Brazil", "brazil", "2008-09-07",
                                         "September 7, 2008", "3.5", "x y", "12 km", "7"};
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> a, b;
    for (std::size_t k = 1 + g.below(3); k > 0; --k) a.push_back(g.pick(pool));
    for (std::size_t k = 1 + g.below(3); k > 0; --k) b.push_back(g.pick(pool));
    EXPECT_TRUE(answer_match(a, a));
    EXPECT_EQ(answer_match(a, b), answer_match(b, a));
    auto shuffled = a;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    EXPECT_TRUE(answer_match(shuffled, a));
  }
}

}  // namespace
}  // namespace tabqa
