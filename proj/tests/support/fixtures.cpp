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

#include "fixtures.h"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "tabqa/text.h"

namespace tabqa::testing {

std::filesystem::path fixture_dir() { return TABQA_FIXTURE_DIR; }

RawTable fixture_table(const std::string& name) {
  RawTable raw = load_csv(fixture_dir() / "tables" / (name + ".csv"));
  raw.name = name;
  return raw;
}

namespace {

std::vector<std::vector<std::string>> read_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read fixture " + path.string());
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split(line, '\t'));
  }
  return rows;
}

}  // namespace

std::vector<RegressionCase> load_regression() {
  std::vector<RegressionCase> out;
  for (const auto& f : read_tsv(fixture_dir() / "regression.tsv")) {
    if (f.size() != 4) throw std::runtime_error("bad regression line");
    auto type = question_type_from_name(f[1]);
    if (!type) throw std::runtime_error("bad question type " + f[1]);
    out.push_back({f[0], *type, f[2], split(f[3], '|')});
  }
  return out;
}

std::vector<CorpusLine> load_abduction_corpus() {
  std::vector<CorpusLine> out;
  for (const auto& f : read_tsv(fixture_dir() / "abduction_corpus.tsv")) {
    if (f.size() != 3) throw std::runtime_error("bad corpus line");
    out.push_back({f[0], f[1], split(f[2], '|')});
  }
  return out;
}

const PreparedTable& FixtureTables::get(const std::string& name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) it = tables_.emplace(name, engine_->prepare(fixture_table(name))).first;
  return *it->second;
}

std::vector<CorpusItem> fixture_corpus(const Engine& engine, FixtureTables& tables) {
  std::vector<CorpusItem> out;
  for (const auto& line : load_abduction_corpus()) {
    const PreparedTable& t = tables.get(line.table);
    AnnotatedQuery aq = annotate(line.question, t.index(), engine.lexicon());
    auto ranked = engine.candidates(aq, t.table());
    if (ranked.empty()) continue;
    out.push_back({std::move(aq), std::move(ranked.front().parse), &t.table(), line.gold});
  }
  return out;
}

EngineConfig fixture_config(AbductionMode mode) {
  EngineConfig c;
  c.abduction = mode;
  return c;
}

std::shared_ptr<const PredictorModel> fixture_model() {
  static std::once_flag once;
  static std::shared_ptr<const PredictorModel> model;
  std::call_once(once, [] {
    Engine engine(fixture_config(AbductionMode::kOff));
    FixtureTables tables(engine);
    auto data = generate_training_data(fixture_corpus(engine, tables));
    model = std::make_shared<const PredictorModel>(train(data));
  });
  return model;
}

std::vector<TrainingExample> planted_corpus(Gen& g, std::size_t n, std::size_t pairs) {
  static const std::vector<std::string> kNoise = {"what", "which", "who", "was", "the", "team",
                                                  "year", "did", "play", "in",  "of",  "had"};
  std::vector<std::string> terms, headings;
  for (std::size_t i = 0; i < pairs; ++i) {
    terms.push_back("term" + std::string(1, static_cast<char>('a' + i)) + "x");
    headings.push_back("Heading " + std::string(1, static_cast<char>('A' + i)));
  }
  std::vector<std::string> distractors = {"Notes", "Venue", "Score", "Comment", "Date"};
  std::vector<TrainingExample> out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t p = g.below(pairs);
    TrainingExample ex;
    ex.terms = {terms[p], g.pick(kNoise)};
    if (g.chance(0.5)) ex.terms.push_back(g.pick(kNoise));
    std::vector<std::string> cols = {g.pick(distractors)};
    const std::size_t width = 3 + g.below(3);
    while (cols.size() < width) {
      const std::string& h = g.chance(0.5) ? g.pick(headings) : g.pick(distractors);
      if (std::find(cols.begin(), cols.end(), h) == cols.end() && h != headings[p]) cols.push_back(h);
    }
    // Any position, the left-most (baseline) one included.
    const std::size_t at = g.below(cols.size() + 1);
    cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(at), headings[p]);
    ex.columns = cols;
    ex.correct = at;
    ex.baseline = 0;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace tabqa::testing
