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

// WikiTableQuestions loading, batch evaluation and corpus statistics.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tabqa/engine.h"
#include "tabqa/predictor.h"

namespace tabqa {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalExample {
  std::string id;
  std::string question;
  std::string table;  // relative to the dataset root, e.g. csv/204-csv/590.csv
  std::vector<std::string> gold;
};

// Published sizes of dataset version 1.0.2.
struct SplitInfo {
  std::string name;  // train, test, extra
  std::string file;  // relative to the dataset root
  std::size_t expected = 0;
};
const std::vector<SplitInfo>& dataset_splits();

// Parses one split file. Fields are id, utterance, context, targetValue, with
// the dataset's escapes (\n, \p for '|', \\).
std::vector<EvalExample> parse_examples(std::string_view tsv);

// Loads a split, checks every table reference resolves and the example count
// equals the published size. Throws DatasetError otherwise.
std::vector<EvalExample> load_dataset(const std::filesystem::path& root, std::string_view split);

// Thread-safe cache of prepared tables keyed by dataset-relative path.
class TableCache {
 public:
  TableCache(std::filesystem::path root, const Engine& engine);
  std::shared_ptr<const PreparedTable> get(const std::string& relative);
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  const Engine* engine_;
  std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const PreparedTable>> tables_;
};

struct TypeCount {
  std::size_t total = 0;
  std::size_t correct = 0;
};

struct EvalRecord {
  std::string id;
  std::string question;
  std::string type;  // question type of the answering candidate, or "none"
  std::vector<std::string> predicted;
  std::vector<std::string> gold;
  bool correct = false;
  bool abduction_used = false;
  std::size_t candidates = 0;
  std::string error;
};

struct EvalReport {
  std::string abduction;  // configuration flag
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t errors = 0;
  std::size_t abduction_used = 0;
  std::size_t candidate_sum = 0;
  std::map<std::string, TypeCount> by_type;
  std::map<std::string, std::size_t> unmatched_terms;
  std::vector<EvalRecord> records;

  double accuracy() const { return total ? double(correct) / double(total) : 0.0; }
  double average_candidates() const { return total ? double(candidate_sum) / double(total) : 0.0; }
  // Associative accumulation of a partial report.
  void merge(const EvalReport& other);
  // Terms sorted by descending frequency (ties alphabetical), at most k.
  std::vector<std::pair<std::string, std::size_t>> top_unmatched(std::size_t k) const;
  std::string to_tsv() const;
  std::string to_text() const;
};

// One example through the full pipeline; failures are recorded, not thrown.
EvalRecord evaluate_one(const Engine& engine, TableCache& tables, const EvalExample& example,
                        std::map<std::string, std::size_t>* unmatched = nullptr);

EvalReport evaluate(const Engine& engine, TableCache& tables,
                    const std::vector<EvalExample>& examples);

struct YesNoCensus {
  std::size_t questions = 0;
  std::size_t yes = 0;
  std::size_t no = 0;
  double yes_fraction() const { return questions ? double(yes) / double(questions) : 0.0; }
};
// Questions whose gold answer is exactly "yes" or "no".
YesNoCensus yes_no_census(const std::vector<EvalExample>& examples);

struct AssociationCount {
  std::size_t term_tables = 0;       // distinct tables asked about with the term
  std::size_t heading_tables = 0;    // ... of which contain the heading
  std::size_t term_questions = 0;    // questions containing the term
  std::size_t heading_questions = 0; // ... whose table contains the heading
};

// Headings per table, as normalized text.
using TableHeadings = std::unordered_map<std::string, std::vector<std::string>>;
TableHeadings load_headings(const std::filesystem::path& root,
                            const std::vector<EvalExample>& examples);

AssociationCount association_census(const std::vector<EvalExample>& examples,
                                    const TableHeadings& headings, std::string_view term,
                                    std::string_view heading);

// (term, heading) pairs by question co-occurrence, most frequent first.
std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> top_associations(
    const std::vector<EvalExample>& examples, const TableHeadings& headings, std::size_t k,
    const Lexicon& lexicon);

// The top-ranked typed candidate of each example paired with its gold answer.
// Items point into `tables`, which must outlive them.
std::vector<CorpusItem> build_corpus(const Engine& engine, TableCache& tables,
                                     const std::vector<EvalExample>& examples);

}  // namespace tabqa
