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

// Brute-force reference evaluation of query plans, written from the plan
// contract in query.h without sharing code with the executor, plus random
// table and plan generators.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tabqa/query.h"
#include "tabqa/table.h"

namespace tabqa::testing {

std::vector<ResultValue> oracle_execute(const QueryPlan& plan, const ComprehendedTable& table);

// Small deterministic generator on top of mt19937_64.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(rng_() % n) : 0; }
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// A raw table with text, integer, decimal, date and score columns, some
// empty cells, repeated values and sometimes a trailing total row.
RawTable random_raw_table(Gen& g, std::size_t max_rows = 50);

// A random plan over the columns of `table`.
QueryPlan random_plan(Gen& g, const ComprehendedTable& table);

std::string describe(const QueryPlan& plan);
std::string describe(const std::vector<ResultValue>& values);

}  // namespace tabqa::testing
