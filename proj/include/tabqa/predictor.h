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

// Operand prediction: which column does a set of unmatched question terms
// refer to? Terms and heading words are embedded in a 50-dimensional space;
// the query vector is the sum of its term vectors, a column vector the sum of
// its heading word vectors, and a softmax over the dot products gives the
// column distribution.
//
// Training data comes from counter-factual parses: every eligible column is
// tried in the missing slot and the example is kept only when exactly one
// column reproduces the gold answer.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/annotator.h"
#include "tabqa/question_typer.h"
#include "tabqa/semantic_parse.h"
#include "tabqa/table.h"

namespace tabqa {

inline constexpr std::size_t kEmbeddingDim = 50;

struct TrainingExample {
  std::vector<std::string> terms;    // W
  std::vector<std::string> columns;  // C, heading texts
  std::size_t correct = 0;           // index of the hot entry of y
  std::size_t baseline = 0;          // index of the left-most string column in C
};

// Stemmed word terms of a question term or heading.
std::vector<std::string> embedding_terms(std::string_view text);

using Embeddings = std::map<std::string, std::vector<double>>;

// Cross-entropy of one example; unknown terms contribute nothing.
double example_loss(const TrainingExample& ex, const Embeddings& e);
// Same loss, adding d(loss)/d(embedding) into `grad` (entries created on demand).
double example_loss_and_gradient(const TrainingExample& ex, const Embeddings& e, Embeddings& grad);

struct TrainingOptions {
  double learning_rate = 0.05;
  int epochs = 200;
  double train_fraction = 0.7;
  std::uint64_t seed = 20260101;
  double init_range = 0.1;
  bool early_stop = true;
};

struct TrainingReport {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double heldout_accuracy = 0.0;
  double baseline_accuracy = 0.0;  // left-most string column on the held-out split
  int best_epoch = 0;
  std::vector<double> train_loss;
  std::vector<double> test_loss;
};

struct Prediction {
  std::vector<double> probabilities;
  std::size_t argmax = 0;
  double confidence = 0.0;
  bool all_oov = false;  // no query term has an embedding
};

class PredictorModel {
 public:
  static constexpr std::uint32_t kVersion = 1;

  const Embeddings& embeddings() const { return embeddings_; }
  Embeddings& mutable_embeddings() { return embeddings_; }
  bool has_term(const std::string& term) const { return embeddings_.count(term) > 0; }

  // Metadata recorded by train().
  int epochs = 0;
  std::uint64_t seed = 0;
  TrainingReport report;

  std::string serialize() const;
  static PredictorModel deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static PredictorModel load(const std::filesystem::path& path);

 private:
  Embeddings embeddings_;  // values are stored as float32 on disk
};

// Throws std::invalid_argument on an empty example list.
PredictorModel train(const std::vector<TrainingExample>& examples,
                     const TrainingOptions& options = {});

// Throws std::invalid_argument on an empty column list.
Prediction predict(const PredictorModel& model, const std::vector<std::string>& terms,
                   const std::vector<std::string>& columns);

// Left-most dimension column whose source column is not numeric, temporal
// or a score. Throws std::invalid_argument when there is none.
std::string baseline_leftmost_string(const ComprehendedTable& table);

enum class AbductionMode { kMl, kBaseline, kOff };
std::string_view abduction_mode_name(AbductionMode m);
std::optional<AbductionMode> abduction_mode_from_name(std::string_view name);

// Columns that may fill a missing slot, excluding columns the parse uses.
std::vector<const ComprehendedColumn*> eligible_columns(const SemanticParse& parse,
                                                        const MissingSlot& slot,
                                                        const ComprehendedTable& table);

// Puts `column` into the missing slot (replacing the headword placeholder for
// answer-column slots).
SemanticParse fill_slot(const SemanticParse& parse, const MissingSlot& slot,
                        const ComprehendedColumn& column, AbductionFill fill);

struct AbductionResult {
  SemanticParse parse;
  bool complete = false;
  int fills = 0;
};

// Fills every missing column slot: argmax of the model in ml mode (top-k
// distinct columns for k missing slots), the left-most string column in
// baseline mode or when every term is out of vocabulary.
AbductionResult abduct(const SemanticParse& parse, const MissingOperandReport& report,
                       const PredictorModel* model, const ComprehendedTable& table,
                       AbductionMode mode);

struct CorpusItem {
  AnnotatedQuery aq;
  SemanticParse parse;  // typed, with exactly one missing column slot
  const ComprehendedTable* table = nullptr;
  std::vector<std::string> gold;
};

struct GenerationStats {
  std::size_t questions = 0;
  std::size_t emitted = 0;
  std::size_t zero_correct = 0;
  std::size_t multi_correct = 0;
  std::size_t skipped = 0;  // not exactly one missing column slot
};

// Number of eligible columns whose substitution yields the gold answer.
std::size_t count_correct_substitutions(const CorpusItem& item,
                                        std::vector<std::size_t>* correct_indices = nullptr);

std::vector<TrainingExample> generate_training_data(const std::vector<CorpusItem>& corpus,
                                                    GenerationStats* stats = nullptr);

// "terms<TAB>columns<TAB>correct-index", lists joined by '|'.
std::string export_corpus(const std::vector<TrainingExample>& examples);

}  // namespace tabqa
