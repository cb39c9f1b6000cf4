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

#include "tabqa/tokenizer.h"

#include "tabqa/text.h"

namespace tabqa {

namespace {

bool is_word_byte(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_joiner(char c) {
  return c == '.' || c == ',' || c == '/' || c == ':' || c == '-';
}

// U+2019 RIGHT SINGLE QUOTATION MARK
bool is_curly_apostrophe(std::string_view t, std::size_t i) {
  return i + 2 < t.size() && static_cast<unsigned char>(t[i]) == 0xE2 &&
         static_cast<unsigned char>(t[i + 1]) == 0x80 &&
         static_cast<unsigned char>(t[i + 2]) == 0x99;
}

}  // namespace

std::vector<TextSpan> tokenize_spans(std::string_view text) {
  std::vector<TextSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_curly_apostrophe(text, i)) {
      i += 3;
      continue;
    }
    if (!is_word_byte(text[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    std::size_t end = i;
    while (end < n) {
      char c = text[end];
      if (is_curly_apostrophe(text, end)) break;
      if (is_word_byte(c)) {
        ++end;
        continue;
      }
      if (is_joiner(c) && end > begin && is_digit(text[end - 1]) && end + 1 < n &&
          is_digit(text[end + 1])) {
        ++end;
        continue;
      }
      if (c == '%' && end > begin && is_digit(text[end - 1])) {
        ++end;
        break;
      }
      if (c == '\'' && end + 1 < n && is_word_byte(text[end + 1])) {
        // possessive: drop "'s" when it ends the word
        if ((text[end + 1] == 's' || text[end + 1] == 'S') &&
            (end + 2 >= n || !is_word_byte(text[end + 2]))) {
          break;
        }
        ++end;
        continue;
      }
      break;
    }
    out.push_back(TextSpan{to_lower(text.substr(begin, end - begin)), begin, end});
    i = end;
    // skip the possessive suffix
    if (i < n && text[i] == '\'' && i + 1 < n && (text[i + 1] == 's' || text[i + 1] == 'S')) {
      i += 2;
    } else if (is_curly_apostrophe(text, i) && i + 3 < n &&
               (text[i + 3] == 's' || text[i + 3] == 'S') &&
               (i + 4 >= n || !is_word_byte(text[i + 4]))) {
      i += 4;
    }
  }
  return out;
}

}  // namespace tabqa
