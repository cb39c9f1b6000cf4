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

// Denotation matching between a predicted answer and the gold values.
// Numbers compare by value (thousands separators and units ignored), full
// dates by their components, everything else as normalized text. Lists
// compare as multisets.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabqa/query.h"

namespace tabqa {

bool value_match(std::string_view predicted, std::string_view gold);
bool answer_match(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);
bool answer_match(const Answer& predicted, const std::vector<std::string>& gold);

}  // namespace tabqa
