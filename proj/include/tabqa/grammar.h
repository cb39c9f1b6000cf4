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

// Grammar over annotation types. Most rules are floating: they combine
// annotations regardless of where they occur in the question. A few rules
// are ordered and only fire on an adjacent sequence (stopwords may sit in
// between), e.g. a comparison word, a bound and a metric.
//
// A candidate parse is a set of rule applications with disjoint token
// coverage. Candidates are enumerated left to right with a beam, then each
// is turned into a SemanticParse by running the rules' slot assignments.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/annotator.h"
#include "tabqa/scorer.h"
#include "tabqa/semantic_parse.h"
#include "tabqa/table.h"

namespace tabqa {

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrammarAction {
  std::string slot;      // dimension, metric, filter, intent, hole, sort, limit, ...
  std::string function;  // e.g. "compare" in filter=compare($1,$2,$3); empty for plain values
  std::vector<std::string> args;
};

struct GrammarRule {
  std::string id;
  std::vector<std::string> symbols;
  std::vector<GrammarAction> actions;
  bool floating = true;
};

class Grammar {
 public:
  static Grammar load(const std::filesystem::path& path);
  // Throws GrammarError with the offending line on malformed or ill-typed rules.
  static Grammar parse(std::string_view text);

  const std::vector<GrammarRule>& rules() const { return rules_; }

 private:
  std::vector<GrammarRule> rules_;
};

struct ParserOptions {
  std::size_t max_candidates = 64;
};

// Grammar symbols an annotation can stand for in the given table.
std::vector<std::string> annotation_symbols(const Annotation& a, const ComprehendedTable& table);
bool symbol_matches(std::string_view rule_symbol, const std::vector<std::string>& symbols);

// Candidates in canonical order (structural hash). Empty only when the query
// has no annotations.
std::vector<SemanticParse> parse_candidates(const AnnotatedQuery& aq,
                                            const ComprehendedTable& table,
                                            const Grammar& grammar, const ScoreWeights& weights,
                                            const ParserOptions& options = {});

double candidate_stats(const std::vector<std::size_t>& candidate_counts);
double candidate_stats(const std::vector<std::vector<SemanticParse>>& parses);

}  // namespace tabqa
