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

// The end-to-end question answering pipeline and its transparency payload.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/annotator.h"
#include "tabqa/grammar.h"
#include "tabqa/predictor.h"
#include "tabqa/query.h"
#include "tabqa/question_typer.h"
#include "tabqa/scorer.h"
#include "tabqa/table.h"

namespace tabqa {

// A comprehended table with its knowledge base and match index. Not movable:
// the index points into the knowledge base.
class PreparedTable {
 public:
  PreparedTable(const RawTable& raw, const Lexicon& lexicon, const RecognizerConfig& recognizers);
  PreparedTable(const PreparedTable&) = delete;
  PreparedTable& operator=(const PreparedTable&) = delete;

  const ComprehendedTable& table() const { return table_; }
  const KnowledgeBase& kb() const { return kb_; }
  const MatchIndex& index() const { return *index_; }

 private:
  ComprehendedTable table_;
  KnowledgeBase kb_;
  std::unique_ptr<MatchIndex> index_;
};

std::shared_ptr<const PreparedTable> prepare_table(
    const RawTable& raw, const Lexicon& lexicon,
    const RecognizerConfig& recognizers = RecognizerConfig::defaults());

struct EngineConfig {
  AbductionMode abduction = AbductionMode::kMl;
  std::filesystem::path data_dir = TABQA_DATA_DIR;
  // Empty paths fall back to the files in data_dir.
  std::filesystem::path weights;
  std::filesystem::path grammar;
  std::filesystem::path model;
  std::filesystem::path recognizers;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TermEntry {
  std::size_t token = 0;
  std::string term;
  bool matched = false;
  bool stopword = false;
  std::optional<ProvenanceKind> provenance;
  std::optional<MatchKind> kind;  // syntactic matches only
  std::string target;             // readable target, e.g. "heading Title" or "intent SORT_MAX"
  std::optional<double> confidence;  // abductive matches only
};

struct FillEntry {
  std::string column;
  std::string heading;
  ProvenanceKind provenance = ProvenanceKind::kMachineLearntAbductive;
  double confidence = 0.0;
  std::vector<std::string> terms;
  std::optional<std::size_t> placeholder_token;
};

struct Interpretation {
  std::string question;
  std::string rewritten;  // with bracketed substitutions
  std::vector<TermEntry> terms;  // one per question token, in order
  std::vector<FillEntry> fills;
  std::optional<SemanticParse> parse;
  std::optional<QuestionType> type;
  std::string sql;
  bool doubt = false;
  std::string message;  // "We think you meant: ..." when in doubt
  std::vector<std::string> diagnostics;
};

struct CandidateView {
  SemanticParse parse;  // typed, before abduction
  ScoreBreakdown score;
  MissingOperandReport missing;
  bool chosen = false;
  std::string status;  // "answered", "incomplete", "plan error: ...", "not tried"
};

struct EngineResult {
  Answer answer;
  Interpretation interpretation;
  std::vector<CandidateView> candidates;
  std::optional<QueryPlan> plan;
  AnnotatedQuery annotated;
  bool abduction_used = false;
};

class Engine {
 public:
  // Loads lexicon, grammar, weights and recognizers; ml mode also loads the
  // model file. Throws ConfigError when something cannot be loaded.
  explicit Engine(const EngineConfig& config);
  // Uses the given model for ml mode (which then needs no model file).
  Engine(const EngineConfig& config, std::shared_ptr<const PredictorModel> model);

  EngineResult answer(std::string_view question, const PreparedTable& table) const;
  std::shared_ptr<const PreparedTable> prepare(const RawTable& raw) const;

  const EngineConfig& config() const { return config_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const Grammar& grammar() const { return grammar_; }
  const ScoreWeights& weights() const { return weights_; }
  const RecognizerConfig& recognizers() const { return recognizers_; }
  const PredictorModel* model() const { return model_.get(); }
  std::shared_ptr<const PredictorModel> shared_model() const { return model_; }

  // The top-ranked, typed candidate parses for a question (no abduction).
  std::vector<RankedCandidate> candidates(const AnnotatedQuery& aq,
                                          const ComprehendedTable& table) const;

 private:
  void load(std::shared_ptr<const PredictorModel> model);

  EngineConfig config_;
  Lexicon lexicon_;
  Grammar grammar_;
  ScoreWeights weights_;
  RecognizerConfig recognizers_;
  std::shared_ptr<const PredictorModel> model_;
};

// Builds the Interpretation of a chosen (possibly abduced) parse.
Interpretation interpret(const AnnotatedQuery& aq, const ComprehendedTable& table,
                         const SemanticParse* parse);

}  // namespace tabqa
