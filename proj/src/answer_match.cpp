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

#include "tabqa/answer_match.h"

#include <cmath>

#include "tabqa/text.h"

namespace tabqa {

namespace {

std::string strip_separators(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // 1,234 -> 1234, but keep commas that are not between digits
    if (s[i] == ',' && i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
        std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      continue;
    }
    out += s[i];
  }
  return out;
}

}  // namespace

bool value_match(std::string_view predicted, std::string_view gold) {
  const std::string p = normalize(predicted), g = normalize(gold);
  if (p == g) return true;
  const TypedValue pv = parse_cell(strip_separators(trim(predicted)));
  const TypedValue gv = parse_cell(strip_separators(trim(gold)));
  const auto* pd = std::get_if<DateValue>(&pv);
  const auto* gd = std::get_if<DateValue>(&gv);
  if (pd && gd && !(pd->year && !pd->month && !pd->day)) return *pd == *gd;
  auto pn = numeric_value(pv), gn = numeric_value(gv);
  if (pn && gn) return std::fabs(*pn - *gn) <= 1e-6 * std::max(1.0, std::fabs(*gn));
  return false;
}

bool answer_match(const std::vector<std::string>& predicted, const std::vector<std::string>& gold) {
  if (predicted.empty() || predicted.size() != gold.size()) return false;
  std::vector<bool> used(gold.size(), false);
  for (const auto& p : predicted) {
    bool found = false;
    for (std::size_t i = 0; i < gold.size() && !found; ++i) {
      if (!used[i] && value_match(p, gold[i])) {
        used[i] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool answer_match(const Answer& predicted, const std::vector<std::string>& gold) {
  if (predicted.is_none()) return false;
  return answer_match(predicted.texts(), gold);
}

}  // namespace tabqa
