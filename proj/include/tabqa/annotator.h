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

// Question annotation: phrases of the question are mapped onto table
// entities (headings and cells) and intent words. Matching is exact string
// matching, relaxed by Porter stemming and bounded spell correction against
// the table vocabulary. The headword following the question word becomes a
// placeholder when nothing else claims it.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "tabqa/table.h"

namespace tabqa {

struct Token {
  std::string text;  // lowercased surface
  std::string stem;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t index = 0;
};

enum class MatchKind { kExact, kStem, kSpellCorrected, kPartial, kPlaceholder };
std::string_view match_kind_name(MatchKind kind);

// Provenance classes shown to users and developers.
enum class ProvenanceKind {
  kExactSyntactic,
  kApproximateSyntactic,
  kMachineLearntAbductive,
  kRuleBasedAbductive,
};
std::string_view provenance_name(ProvenanceKind kind);
ProvenanceKind provenance_of(MatchKind kind);

struct EntityTarget {
  KbRef ref;
};
struct IntentTarget {
  std::string intent;
};
struct NumberTarget {
  double value = 0.0;
};
struct PlaceholderTarget {};

using AnnotationTarget = std::variant<EntityTarget, IntentTarget, NumberTarget, PlaceholderTarget>;

struct Annotation {
  int id = 0;
  std::size_t start = 0;   // first token
  std::size_t length = 1;  // tokens covered
  AnnotationTarget target;
  MatchKind kind = MatchKind::kExact;
  std::string phrase;  // normalized content of the question span that matched
  std::string key;     // the key it matched (KB key, lexicon phrase, number text)
  std::string provenance;

  bool covers(std::size_t token) const { return token >= start && token < start + length; }
  bool is_entity() const { return std::holds_alternative<EntityTarget>(target); }
  bool is_intent() const { return std::holds_alternative<IntentTarget>(target); }
  bool is_number() const { return std::holds_alternative<NumberTarget>(target); }
  bool is_placeholder() const { return std::holds_alternative<PlaceholderTarget>(target); }
};

struct Headword {
  std::size_t start = 0;
  std::size_t length = 1;
  bool plural = false;
};

struct AnnotatedQuery {
  std::string question;
  std::vector<Token> tokens;
  std::vector<Annotation> annotations;
  std::optional<Headword> headword;
  std::vector<std::size_t> unmatched;  // token indices
  std::vector<bool> stopword;          // per token

  bool headword_plural() const { return headword && headword->plural; }
  std::vector<std::string> unmatched_terms() const;
  // Unmatched terms plus placeholder-annotated terms: the abduction input.
  std::vector<std::string> abduction_terms() const;
  const Annotation& annotation(int id) const;
};

struct IntentPhrase {
  std::vector<std::string> tokens;
  std::string intent;
};

// Intent lexicon, stopword list and headword-breaking verbs.
class Lexicon {
 public:
  static Lexicon load(const std::filesystem::path& intents_file,
                      const std::filesystem::path& stopwords_file,
                      const std::filesystem::path& verbs_file);
  static Lexicon load_dir(const std::filesystem::path& data_dir);
  static Lexicon parse(std::string_view intents, std::string_view stopwords,
                       std::string_view verbs);

  bool is_stopword(std::string_view w) const { return stopwords_.count(std::string(w)) > 0; }
  bool is_verb(std::string_view w) const { return verbs_.count(std::string(w)) > 0; }
  bool is_intent_word(std::string_view w) const { return intent_words_.count(std::string(w)) > 0; }
  static bool is_question_word(std::string_view w);
  const std::vector<IntentPhrase>& intents() const { return intents_; }
  std::size_t longest_intent() const { return longest_; }

 private:
  std::vector<IntentPhrase> intents_;
  std::unordered_set<std::string> stopwords_;
  std::unordered_set<std::string> verbs_;
  std::unordered_set<std::string> intent_words_;
  std::size_t longest_ = 0;
};

struct AnnotatorOptions {
  std::size_t short_word_max_edits = 1;
  std::size_t long_word_max_edits = 2;
  std::size_t long_word_length = 8;
  std::size_t min_correctable_length = 4;
  // A sub-phrase of a cell that would match more distinct cells than this is
  // too ambiguous to annotate.
  std::size_t max_partial_entries = 5;
};

// Per-table matching structures derived from a knowledge base. Build once per
// table and reuse across questions.
class MatchIndex {
 public:
  MatchIndex(const KnowledgeBase& kb, const Lexicon& lexicon);

  const KnowledgeBase& kb() const { return *kb_; }
  const std::vector<std::size_t>* by_content(const std::string& key) const;
  const std::vector<std::size_t>* by_stem(const std::string& key) const;
  const std::vector<std::size_t>* by_partial(const std::string& key) const;
  std::size_t longest_content() const { return longest_; }
  bool in_vocabulary(const std::string& word) const;
  bool stem_in_vocabulary(const std::string& stem) const;
  // Best correction within `max_edits`, ties broken by table frequency then
  // alphabetically.
  std::optional<std::string> correct(const std::string& word, std::size_t max_edits) const;

 private:
  const KnowledgeBase* kb_;
  std::unordered_map<std::string, std::vector<std::size_t>> content_;
  std::unordered_map<std::string, std::vector<std::size_t>> stem_;
  std::unordered_map<std::string, std::vector<std::size_t>> partial_;
  std::unordered_set<std::string> vocab_stems_;
  std::vector<std::pair<std::string, std::size_t>> vocab_;  // word, frequency
  std::size_t longest_ = 0;
};

// Throws std::invalid_argument on an empty question.
std::vector<Token> tokenize(std::string_view question);

AnnotatedQuery annotate(std::string_view question, const MatchIndex& index,
                        const Lexicon& lexicon, const AnnotatorOptions& options = {});
AnnotatedQuery annotate(std::string_view question, const KnowledgeBase& kb,
                        const Lexicon& lexicon, const AnnotatorOptions& options = {});

std::optional<Headword> detect_headword(const std::vector<Token>& tokens,
                                        const std::vector<Annotation>& annotations,
                                        const Lexicon& lexicon);
bool is_plural_noun(std::string_view word);

}  // namespace tabqa
