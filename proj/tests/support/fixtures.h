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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "oracle.h"
#include "tabqa/engine.h"
#include "tabqa/predictor.h"

namespace tabqa::testing {

std::filesystem::path fixture_dir();
RawTable fixture_table(const std::string& name);

struct RegressionCase {
  std::string table;
  QuestionType type = QuestionType::kOtherType;
  std::string question;
  std::vector<std::string> gold;
};
inline void PrintTo(const RegressionCase& c, std::ostream* os) { *os << '"' << c.question << '"'; }
std::vector<RegressionCase> load_regression();

struct CorpusLine {
  std::string table;
  std::string question;
  std::vector<std::string> gold;
};
std::vector<CorpusLine> load_abduction_corpus();

// Prepared fixture tables for one engine, kept alive for CorpusItem pointers.
class FixtureTables {
 public:
  explicit FixtureTables(const Engine& engine) : engine_(&engine) {}
  const PreparedTable& get(const std::string& name);

 private:
  const Engine* engine_;
  std::map<std::string, std::shared_ptr<const PreparedTable>> tables_;
};

std::vector<CorpusItem> fixture_corpus(const Engine& engine, FixtureTables& tables);

// Operand predictor trained on the counter-factual examples of the fixture
// corpus (computed once per process).
std::shared_ptr<const PredictorModel> fixture_model();

EngineConfig fixture_config(AbductionMode mode);

// Synthetic corpus with `pairs` planted term -> heading associations, noise
// terms and distractor headings. The correct column's position is random and
// the baseline index is always 0.
std::vector<TrainingExample> planted_corpus(Gen& g, std::size_t n, std::size_t pairs);

}  // namespace tabqa::testing
