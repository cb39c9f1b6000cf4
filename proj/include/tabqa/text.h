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

// String helpers used across the engine and the operand predictor.
// All matching in the engine goes through normalize().

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tabqa {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Lowercase, trim, collapse internal whitespace, strip surrounding
// punctuation. Used for knowledge-base keys and text comparison.
std::string normalize(std::string_view s);

// Splits normalized text into word tokens using the question tokenizer rules
// (punctuation kept only inside numbers and dates).
std::vector<std::string> word_tokens(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);

bool is_ascii_alnum(char c);
bool has_digit(std::string_view s);

// Porter (1980) suffix-stripping stemmer. Input is expected lowercase.
std::string porter_stem(std::string_view word);

// Levenshtein distance; returns max_distance + 1 as soon as the bound is
// exceeded.
std::size_t edit_distance(std::string_view a, std::string_view b,
                          std::size_t max_distance = static_cast<std::size_t>(-1));

}  // namespace tabqa
