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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tabqa {

struct TextSpan {
  std::string text;  // lowercased surface
  std::size_t begin = 0;
  std::size_t end = 0;  // byte offsets into the source, half open
};

// Word tokenizer. Tokens are runs of letters/digits (any non-ASCII byte counts
// as a letter). '.', ',', '/', ':' and '-' survive only between two digits, a
// trailing '%' sticks to a number, and a possessive "'s" is dropped.
std::vector<TextSpan> tokenize_spans(std::string_view text);

}  // namespace tabqa
