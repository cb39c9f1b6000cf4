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

#include "tabqa/scorer.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tabqa/text.h"

namespace tabqa {

namespace {

std::size_t feature_index(std::string_view feature) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == feature) return i;
  }
  throw std::invalid_argument("unknown scoring feature: " + std::string(feature));
}

}  // namespace

double& ScoreWeights::operator[](std::string_view feature) { return values[feature_index(feature)]; }

double ScoreWeights::operator[](std::string_view feature) const {
  return values[feature_index(feature)];
}

ScoreWeights ScoreWeights::parse(std::string_view text) {
  ScoreWeights w;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("malformed weight line: " + line);
    const std::string name = trim(line.substr(0, tab));
    const std::string value = trim(line.substr(tab + 1));
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("malformed weight value: " + line);
    w[name] = v;
  }
  return w;
}

ScoreWeights ScoreWeights::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read weights file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ScoreBreakdown score_annotations(const std::vector<int>& annotation_ids, const AnnotatedQuery& aq,
                                 const ScoreWeights& weights) {
  ScoreBreakdown b;
  std::set<std::size_t> covered;
  std::set<int> seen;
  for (int id : annotation_ids) {
    if (!seen.insert(id).second) continue;
    const Annotation& a = aq.annotation(id);
    for (std::size_t t = a.start; t < a.start + a.length; ++t) {
      if (!aq.stopword[t]) covered.insert(t);
    }
    if (a.is_placeholder()) continue;
    if (a.kind == MatchKind::kExact) {
      ++b.exact_matches;
    } else {
      ++b.approximate_matches;
    }
    if (const auto* e = std::get_if<EntityTarget>(&a.target)) {
      if (e->ref.kind == KbRef::Kind::kHeading) {
        ++b.header_matches;
      } else {
        ++b.cell_matches;
      }
    }
  }
  b.annotated_words = static_cast<int>(covered.size());
  const auto f = b.features();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    b.contributions[i] = weights.values[i] * f[i];
    b.total += b.contributions[i];
  }
  return b;
}

ScoreBreakdown score(const SemanticParse& candidate, const AnnotatedQuery& aq,
                     const ScoreWeights& weights) {
  return score_annotations(candidate.provenance, aq, weights);
}

std::vector<RankedCandidate> rank(const std::vector<SemanticParse>& candidates,
                                  const AnnotatedQuery& aq, const ScoreWeights& weights) {
  std::vector<RankedCandidate> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back({c, score(c, aq, weights)});
  std::stable_sort(out.begin(), out.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return a.score.total > b.score.total;
  });
  return out;
}

}  // namespace tabqa
