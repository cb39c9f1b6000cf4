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

// Linear ranking of candidate parses. Coverage of question words dominates;
// the remaining features break ties.

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tabqa/annotator.h"
#include "tabqa/semantic_parse.h"

namespace tabqa {

inline constexpr std::size_t kFeatureCount = 5;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "coverage", "exact", "approximate", "header", "cell"};

struct ScoreWeights {
  std::array<double, kFeatureCount> values = {10.0, 1.0, 0.25, 0.5, 0.4};

  double& operator[](std::string_view feature);
  double operator[](std::string_view feature) const;

  // "feature<TAB>weight" per line, '#' comments. Unknown features throw.
  static ScoreWeights load(const std::filesystem::path& path);
  static ScoreWeights parse(std::string_view text);
};

struct ScoreBreakdown {
  int annotated_words = 0;
  int exact_matches = 0;
  int approximate_matches = 0;
  int header_matches = 0;
  int cell_matches = 0;
  std::array<double, kFeatureCount> contributions{};
  double total = 0.0;

  std::array<double, kFeatureCount> features() const {
    return {double(annotated_words), double(exact_matches), double(approximate_matches),
            double(header_matches), double(cell_matches)};
  }
};

// Features of a set of consumed annotations; score() applies this to the
// candidate's provenance trail.
ScoreBreakdown score_annotations(const std::vector<int>& annotation_ids, const AnnotatedQuery& aq,
                                 const ScoreWeights& weights);
ScoreBreakdown score(const SemanticParse& candidate, const AnnotatedQuery& aq,
                     const ScoreWeights& weights);

struct RankedCandidate {
  SemanticParse parse;
  ScoreBreakdown score;
};

// Stable descending sort by total score. Equal scores keep input order, and
// the parser already emits candidates in structural-hash order.
std::vector<RankedCandidate> rank(const std::vector<SemanticParse>& candidates,
                                  const AnnotatedQuery& aq, const ScoreWeights& weights);

}  // namespace tabqa
