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
#include <vector>

#include "fixtures.h"
#include "oracle.h"
#include "tabqa/table.h"
#include "tabqa/text.h"

namespace tabqa {
namespace {

using testing::fixture_table;

TEST(ParseCell, Numbers) {
  auto v = parse_cell("1,234");
  ASSERT_TRUE(std::holds_alternative<NumberValue>(v));
  EXPECT_DOUBLE_EQ(std::get<NumberValue>(v).value, 1234.0);
  EXPECT_EQ(display(v), "1,234");

  v = parse_cell("-3.5");
  ASSERT_TRUE(std::holds_alternative<NumberValue>(v));
  EXPECT_DOUBLE_EQ(std::get<NumberValue>(v).value, -3.5);

  v = parse_cell("12 km");
  ASSERT_TRUE(std::holds_alternative<NumberValue>(v));
  EXPECT_EQ(std::get<NumberValue>(v).unit, "km");

  v = parse_cell("45%");
  ASSERT_TRUE(std::holds_alternative<NumberValue>(v));
  EXPECT_EQ(std::get<NumberValue>(v).unit, "%");

  EXPECT_TRUE(std::holds_alternative<TextValue>(parse_cell("12,34")));
  EXPECT_TRUE(std::holds_alternative<TextValue>(parse_cell("12 parsecs")));
}

TEST(ParseCell, Dates) {
  EXPECT_EQ(parse_cell("September 7, 2008"), TypedValue(DateValue{2008, 9, 7}));
  EXPECT_EQ(parse_cell("7 September 2008"), TypedValue(DateValue{2008, 9, 7}));
  EXPECT_EQ(parse_cell("2008-09-07"), TypedValue(DateValue{2008, 9, 7}));
  EXPECT_EQ(parse_cell("2008/9/7"), TypedValue(DateValue{2008, 9, 7}));
  EXPECT_EQ(parse_cell("1995"), TypedValue(DateValue{1995, std::nullopt, std::nullopt}));
  EXPECT_EQ(display(parse_cell("1995")), "1995");
  EXPECT_EQ(numeric_value(parse_cell("1995")), 1995.0);
  EXPECT_FALSE(numeric_value(parse_cell("2008-09-07")));
  EXPECT_LT(*chrono_key(parse_cell("September 7, 2008")), *chrono_key(parse_cell("2008-09-14")));
}

TEST(ParseCell, ScoresTimesAndEmpty) {
  auto s = parse_cell("W 21-14");
  ASSERT_TRUE(std::holds_alternative<ScoreValue>(s));
  EXPECT_EQ(std::get<ScoreValue>(s).result, 'W');
  EXPECT_EQ(std::get<ScoreValue>(s).points_for, 21);
  EXPECT_EQ(std::get<ScoreValue>(s).points_against, 14);

  auto t = parse_cell("1:02:03");
  ASSERT_TRUE(std::holds_alternative<TimeValue>(t));
  EXPECT_DOUBLE_EQ(std::get<TimeValue>(t).seconds, 3723.0);

  EXPECT_TRUE(is_empty(parse_cell("   ")));
  EXPECT_EQ(parse_cell("Homecoming"), TypedValue(TextValue{"Homecoming"}));
}

TEST(ParseCell, RecognizersCanBeSwitchedOff) {
  auto config = RecognizerConfig::parse("number\n");
  EXPECT_TRUE(std::holds_alternative<TextValue>(parse_cell("W 21-14", config)));
  EXPECT_TRUE(std::holds_alternative<NumberValue>(parse_cell("1995", config)));
  EXPECT_THROW(RecognizerConfig::parse("date julian\n"), LoadError);
}

TEST(FormatNumber, IntegralAndFractional) {
  EXPECT_EQ(format_number(42.0), "42");
  EXPECT_EQ(format_number(-7.0), "-7");
  EXPECT_EQ(format_number(2.5), "2.5");
}

TEST(Csv, QuotingPaddingAndTruncation) {
  RawTable t = parse_csv("a,b,c\n\"x, y\",\"say \"\"hi\"\"\",3\nshort\n1,2,3,4\n", "t");
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0][0], "x, y");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"short", "", ""}));
  EXPECT_EQ(t.rows[2].size(), 3u);
  EXPECT_EQ(t.warnings.size(), 2u);
  EXPECT_THROW(parse_csv("", "empty"), LoadError);
  EXPECT_THROW(load_csv("/nonexistent/table.csv"), LoadError);
}

TEST(Csv, DatasetTsvVariant) {
  RawTable t = parse_table_tsv("Name\tNotes\nA\tline\\none\nB\tpipe\\pthing\n", "t");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "line\none");
  EXPECT_EQ(t.rows[1][1], "pipe|thing");
}

TEST(Comprehend, MedalsTable) {
  ComprehendedTable t = comprehend(fixture_table("medals"));
  EXPECT_EQ(t.row_count, 9u);
  EXPECT_EQ(t.total_rows, (std::vector<std::size_t>{8}));
  EXPECT_EQ(t.body_rows.size(), 8u);

  const auto& nation = t.at("c1");
  EXPECT_EQ(nation.role, ColumnRole::kDimension);
  EXPECT_EQ(nation.name, "Nation");
  EXPECT_EQ(display(nation.values[6]), "Peru");

  const auto& gold = t.at("c2_num");
  EXPECT_EQ(gold.role, ColumnRole::kMetric);
  EXPECT_EQ(gold.name, "Gold");
  EXPECT_EQ(numeric_value(gold.values[2]), 7.0);

  // Every source column keeps a dimension; numeric ones add a metric twin.
  EXPECT_NE(t.find("c2"), nullptr);
  EXPECT_EQ(t.find("c1_num"), nullptr);

  const auto& rid = t.row_id();
  EXPECT_EQ(rid.name, "RowID");
  for (std::size_t i = 0; i < t.body_rows.size(); ++i) {
    EXPECT_EQ(numeric_value(rid.values[t.body_rows[i]]), static_cast<double>(i));
  }
  EXPECT_TRUE(is_empty(rid.values[8]));
}

TEST(Comprehend, ScoreAndDateColumns) {
  ComprehendedTable t = comprehend(fixture_table("games"));
  EXPECT_EQ(t.at("c1_date").role, ColumnRole::kDate);
  EXPECT_EQ(t.at("c3_result").role, ColumnRole::kDimension);
  EXPECT_EQ(numeric_value(t.at("c3_for").values[10]), 21.0);
  EXPECT_EQ(numeric_value(t.at("c3_against").values[10]), 14.0);
  EXPECT_EQ(display(t.at("c3_result").values[1]), "L");
  EXPECT_EQ(t.find("c3_num"), nullptr);

  // Score parts are excluded from the plain dimension list.
  for (const auto* c : t.dimension_columns()) EXPECT_EQ(c->origin.part, 0) << c->id;
}

TEST(Comprehend, YearColumnsAreDatesAndNumbers) {
  ComprehendedTable t = comprehend(fixture_table("seasons"));
  EXPECT_NE(t.find("c0"), nullptr);
  EXPECT_NE(t.find("c0_date"), nullptr);
  EXPECT_NE(t.find("c0_num"), nullptr);
}

TEST(KnowledgeBase, HeadingsAndCells) {
  ComprehendedTable t = comprehend(fixture_table("barton"));
  KnowledgeBase kb = build_knowledge_base(t);
  const KbEntry* title = kb.lookup("title");
  ASSERT_NE(title, nullptr);
  EXPECT_EQ(title->refs.front(), (KbRef{KbRef::Kind::kHeading, "c1", 0}));

  const KbEntry* notes = kb.lookup("also producer");
  ASSERT_NE(notes, nullptr);
  ASSERT_EQ(notes->refs.size(), 1u);
  EXPECT_EQ(notes->refs[0], (KbRef{KbRef::Kind::kCell, "c3", 12}));

  const KbEntry* short_film = kb.lookup("short film");
  ASSERT_NE(short_film, nullptr);
  EXPECT_EQ(short_film->refs.size(), 2u);
  EXPECT_EQ(kb.word_frequency("short"), 2u);
  EXPECT_EQ(kb.lookup("nonexistent"), nullptr);
}

TEST(ComprehendProperty, ShapeInvariantsOnRandomTables) {
  testing::Gen g(101);
  for (int i = 0; i < 300; ++i) {
    RawTable raw = testing::random_raw_table(g);
    ComprehendedTable t = comprehend(raw);
    ASSERT_EQ(t.row_count, raw.rows.size());

    std::set<std::size_t> rows(t.body_rows.begin(), t.body_rows.end());
    for (auto r : t.total_rows) EXPECT_TRUE(rows.insert(r).second);
    EXPECT_EQ(rows.size(), t.row_count);

    std::set<std::string> ids;
    for (const auto& c : t.columns) {
      EXPECT_TRUE(ids.insert(c.id).second) << c.id;
      EXPECT_EQ(c.values.size(), t.row_count) << c.id;
      if (c.role == ColumnRole::kMetric) {
        for (const auto& v : c.values) EXPECT_TRUE(is_empty(v) || numeric_value(v)) << c.id;
      }
    }
    for (std::size_t j = 0; j < raw.header.size(); ++j) {
      const auto& dim = t.at("c" + std::to_string(j));
      for (std::size_t r = 0; r < t.row_count; ++r) {
        EXPECT_EQ(display(dim.values[r]), trim(raw.rows[r][j]));
      }
    }
    KnowledgeBase kb = build_knowledge_base(t);
    for (const auto& e : kb.entries()) {
      EXPECT_EQ(e.key, normalize(e.key));
      EXPECT_EQ(kb.lookup(e.key), &e);
    }
  }
}

}  // namespace
}  // namespace tabqa
