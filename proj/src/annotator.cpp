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

#include "tabqa/annotator.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tabqa/text.h"
#include "tabqa/tokenizer.h"

namespace tabqa {

std::string_view match_kind_name(MatchKind kind) {
  switch (kind) {
    case MatchKind::kExact: return "exact";
    case MatchKind::kStem: return "stem";
    case MatchKind::kSpellCorrected: return "spell-corrected";
    case MatchKind::kPartial: return "partial";
    case MatchKind::kPlaceholder: return "placeholder";
  }
  return "exact";
}

std::string_view provenance_name(ProvenanceKind kind) {
  switch (kind) {
    case ProvenanceKind::kExactSyntactic: return "exact syntactic match";
    case ProvenanceKind::kApproximateSyntactic: return "approximate syntactic match";
    case ProvenanceKind::kMachineLearntAbductive: return "machine-learnt abductive match";
    case ProvenanceKind::kRuleBasedAbductive: return "rule-based abductive match";
  }
  return "exact syntactic match";
}

ProvenanceKind provenance_of(MatchKind kind) {
  return kind == MatchKind::kExact ? ProvenanceKind::kExactSyntactic
                                   : ProvenanceKind::kApproximateSyntactic;
}

std::vector<std::string> AnnotatedQuery::unmatched_terms() const {
  std::vector<std::string> out;
  for (auto i : unmatched) out.push_back(tokens[i].text);
  return out;
}

std::vector<std::string> AnnotatedQuery::abduction_terms() const {
  std::vector<std::string> out = unmatched_terms();
  for (const auto& a : annotations) {
    if (!a.is_placeholder()) continue;
    for (std::size_t t = a.start; t < a.start + a.length; ++t) {
      if (!stopword[t]) out.push_back(tokens[t].text);
    }
  }
  return out;
}

const Annotation& AnnotatedQuery::annotation(int id) const {
  for (const auto& a : annotations) {
    if (a.id == id) return a;
  }
  throw std::out_of_range("no annotation " + std::to_string(id));
}

// ---------------------------------------------------------------------------

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read lexicon file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> data_lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto& line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

bool Lexicon::is_question_word(std::string_view w) {
  static constexpr std::array<std::string_view, 8> kWords = {
      "who", "what", "which", "where", "when", "how", "whom", "whose"};
  return std::find(kWords.begin(), kWords.end(), w) != kWords.end();
}

Lexicon Lexicon::parse(std::string_view intents, std::string_view stopwords,
                       std::string_view verbs) {
  Lexicon lex;
  for (const auto& line : data_lines(intents)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("intent lexicon line without a tab: '" + line + "'");
    }
    IntentPhrase p{word_tokens(normalize(line.substr(0, tab))), trim(line.substr(tab + 1))};
    if (p.tokens.empty() || p.intent.empty()) continue;
    for (const auto& w : p.tokens) lex.intent_words_.insert(w);
    lex.longest_ = std::max(lex.longest_, p.tokens.size());
    lex.intents_.push_back(std::move(p));
  }
  for (const auto& line : data_lines(stopwords)) lex.stopwords_.insert(normalize(line));
  for (const auto& line : data_lines(verbs)) lex.verbs_.insert(normalize(line));
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& intents_file,
                      const std::filesystem::path& stopwords_file,
                      const std::filesystem::path& verbs_file) {
  return parse(slurp(intents_file), slurp(stopwords_file), slurp(verbs_file));
}

Lexicon Lexicon::load_dir(const std::filesystem::path& data_dir) {
  return load(data_dir / "intents.tsv", data_dir / "stopwords.txt", data_dir / "verbs.txt");
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> content_tokens(const std::vector<std::string>& tokens,
                                        const Lexicon& lexicon) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (!lexicon.is_stopword(t)) out.push_back(t);
  }
  if (out.empty()) return tokens;
  return out;
}

std::vector<std::string> stems_of(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(porter_stem(w));
  return out;
}

void add_unique(std::vector<std::size_t>& v, std::size_t x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

MatchIndex::MatchIndex(const KnowledgeBase& kb, const Lexicon& lexicon) : kb_(&kb) {
  const auto& entries = kb.entries();
  for (std::size_t e = 0; e < entries.size(); ++e) {
    auto content = content_tokens(entries[e].tokens, lexicon);
    if (content.empty()) continue;
    longest_ = std::max(longest_, content.size());
    add_unique(content_[join(content, " ")], e);
    add_unique(stem_[join(stems_of(content), " ")], e);
    if (content.size() >= 2 && content.size() <= 8) {
      const std::size_t max_len = std::min<std::size_t>(3, content.size() - 1);
      for (std::size_t len = 1; len <= max_len; ++len) {
        for (std::size_t b = 0; b + len <= content.size(); ++b) {
          bool informative = false;
          for (std::size_t k = b; k < b + len; ++k) {
            if (content[k].size() >= 3 && !has_digit(content[k])) informative = true;
          }
          if (!informative) continue;
          std::vector<std::string> sub(content.begin() + static_cast<std::ptrdiff_t>(b),
                                       content.begin() + static_cast<std::ptrdiff_t>(b + len));
          add_unique(partial_[join(sub, " ")], e);
        }
      }
    }
  }
  for (const auto& [word, freq] : kb.vocabulary()) {
    vocab_.emplace_back(word, freq);
    vocab_stems_.insert(porter_stem(word));
  }
  std::sort(vocab_.begin(), vocab_.end());
}

const std::vector<std::size_t>* MatchIndex::by_content(const std::string& key) const {
  auto it = content_.find(key);
  return it == content_.end() ? nullptr : &it->second;
}

const std::vector<std::size_t>* MatchIndex::by_stem(const std::string& key) const {
  auto it = stem_.find(key);
  return it == stem_.end() ? nullptr : &it->second;
}

const std::vector<std::size_t>* MatchIndex::by_partial(const std::string& key) const {
  auto it = partial_.find(key);
  return it == partial_.end() ? nullptr : &it->second;
}

bool MatchIndex::in_vocabulary(const std::string& word) const {
  return kb_->word_frequency(word) > 0;
}

bool MatchIndex::stem_in_vocabulary(const std::string& stem) const {
  return vocab_stems_.count(stem) > 0;
}

std::optional<std::string> MatchIndex::correct(const std::string& word,
                                               std::size_t max_edits) const {
  std::optional<std::string> best;
  std::size_t best_dist = max_edits + 1;
  std::size_t best_freq = 0;
  // vocab_ is sorted alphabetically, so the first of equal candidates wins.
  for (const auto& [candidate, freq] : vocab_) {
    if (candidate.size() < 3 || has_digit(candidate)) continue;
    std::size_t d = edit_distance(word, candidate, max_edits);
    if (d == 0 || d > max_edits) continue;
    if (d < best_dist || (d == best_dist && freq > best_freq)) {
      best = candidate;
      best_dist = d;
      best_freq = freq;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::vector<Token> tokenize(std::string_view question) {
  if (trim(question).empty()) throw std::invalid_argument("empty question");
  std::vector<Token> out;
  for (auto& span : tokenize_spans(question)) {
    Token t;
    t.stem = porter_stem(span.text);
    t.text = std::move(span.text);
    t.begin = span.begin;
    t.end = span.end;
    t.index = out.size();
    out.push_back(std::move(t));
  }
  if (out.empty()) throw std::invalid_argument("question has no words");
  return out;
}

bool is_plural_noun(std::string_view word) {
  static const std::unordered_set<std::string> kIrregular = {
      "people", "men", "women", "children", "feet", "teeth", "mice", "geese", "data", "criteria"};
  static const std::unordered_set<std::string> kNotPlural = {
      "series", "species", "news",   "physics", "mathematics", "politics", "athletics",
      "gymnastics", "status", "bus", "gas", "this", "has", "was", "its", "yes", "less",
      "thus", "lens", "chaos", "canvas", "always", "sometimes", "perhaps", "us", "does",
      "is", "as", "whereas", "across", "various", "previous", "famous", "plus", "minus",
      "campus", "census", "virus", "bonus", "genus", "focus", "chorus", "olympics", "games"};
  std::string w(word);
  if (kIrregular.count(w)) return true;
  if (w.size() <= 3 || w.back() != 's' || kNotPlural.count(w)) return false;
  if (w.ends_with("ss") || w.ends_with("us") || w.ends_with("is") || w.ends_with("ous")) {
    return false;
  }
  // Singular by stripping "es" (boxes, matches) or "s"; either must leave a
  // plausible word stem with a vowel.
  std::string singular = w.substr(0, w.size() - 1);
  if (w.ends_with("ies")) singular = w.substr(0, w.size() - 3) + "y";
  return singular.find_first_of("aeiouy") != std::string::npos;
}

std::optional<Headword> detect_headword(const std::vector<Token>& tokens,
                                        const std::vector<Annotation>& annotations,
                                        const Lexicon& lexicon) {
  constexpr std::size_t kMaxHeadwordTokens = 3;
  const std::size_t n = tokens.size();
  std::size_t q = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (Lexicon::is_question_word(tokens[i].text)) {
      q = i;
      break;
    }
  }
  if (q == n) return std::nullopt;

  std::size_t s = q + 1;
  if (tokens[q].text == "how" && s < n && (tokens[s].text == "many" || tokens[s].text == "much")) {
    ++s;
    if (s < n && tokens[s].text == "more") ++s;
  }
  while (s < n && lexicon.is_stopword(tokens[s].text)) ++s;

  auto intent_at = [&](std::size_t t) {
    return std::any_of(annotations.begin(), annotations.end(), [&](const Annotation& a) {
      return a.is_intent() && a.covers(t);
    });
  };
  std::size_t e = s;
  while (e < n && e - s < kMaxHeadwordTokens) {
    const auto& w = tokens[e].text;
    if (lexicon.is_stopword(w) || lexicon.is_verb(w) || has_digit(w) ||
        Lexicon::is_question_word(w) || intent_at(e)) {
      break;
    }
    ++e;
  }
  if (e == s) return std::nullopt;
  return Headword{s, e - s, is_plural_noun(tokens[e - 1].text)};
}

namespace {

std::string describe_ref(const KbRef& ref) {
  if (ref.kind == KbRef::Kind::kHeading) return "heading of " + ref.column;
  return "cell " + ref.column + "[" + std::to_string(ref.row) + "]";
}

struct SpanMatch {
  std::size_t raw_length = 0;
  MatchKind kind = MatchKind::kExact;
  std::vector<std::size_t> entries;
  std::string phrase;
};

}  // namespace

AnnotatedQuery annotate(std::string_view question, const MatchIndex& index,
                        const Lexicon& lexicon, const AnnotatorOptions& options) {
  AnnotatedQuery aq;
  aq.question = std::string(question);
  aq.tokens = tokenize(question);
  const std::size_t n = aq.tokens.size();
  const KnowledgeBase& kb = index.kb();

  aq.stopword.resize(n);
  for (std::size_t i = 0; i < n; ++i) aq.stopword[i] = lexicon.is_stopword(aq.tokens[i].text);

  // content positions (non-stopwords) in question order
  std::vector<std::size_t> content;
  std::vector<std::size_t> content_pos(n, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n; ++i) {
    if (!aq.stopword[i]) {
      content_pos[i] = content.size();
      content.push_back(i);
    }
  }

  // spell-corrected forms
  std::vector<std::string> corrected(n);
  std::vector<bool> was_corrected(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = aq.tokens[i];
    corrected[i] = t.text;
    if (aq.stopword[i] || has_digit(t.text) || t.text.size() < options.min_correctable_length ||
        index.in_vocabulary(t.text) || index.stem_in_vocabulary(t.stem) ||
        lexicon.is_intent_word(t.text) || Lexicon::is_question_word(t.text) ||
        lexicon.is_verb(t.text)) {
      continue;
    }
    std::size_t cap = t.text.size() >= options.long_word_length ? options.long_word_max_edits
                                                                : options.short_word_max_edits;
    if (auto fix = index.correct(t.text, cap)) {
      corrected[i] = *fix;
      was_corrected[i] = true;
    }
  }

  int next_id = 0;
  auto emit_entities = [&](std::size_t start, const SpanMatch& m) {
    for (auto e : m.entries) {
      const auto& entry = kb.entries()[e];
      for (const auto& ref : entry.refs) {
        Annotation a;
        a.id = next_id++;
        a.start = start;
        a.length = m.raw_length;
        a.target = EntityTarget{ref};
        a.kind = m.kind;
        a.phrase = m.phrase;
        a.key = entry.key;
        a.provenance = std::string(provenance_name(provenance_of(m.kind))) + " (" +
                       std::string(match_kind_name(m.kind)) + "): '" + entry.key + "' -> " +
                       describe_ref(ref);
        aq.annotations.push_back(std::move(a));
      }
    }
  };

  std::size_t i = 0;
  while (i < n) {
    // intents, over raw tokens
    std::size_t intent_len = 0;
    std::vector<const IntentPhrase*> intents;
    for (const auto& p : lexicon.intents()) {
      const std::size_t len = p.tokens.size();
      if (i + len > n || len < intent_len) continue;
      bool ok = true;
      for (std::size_t k = 0; k < len && ok; ++k) ok = aq.tokens[i + k].text == p.tokens[k];
      if (!ok) continue;
      if (len > intent_len) {
        intent_len = len;
        intents.clear();
      }
      intents.push_back(&p);
    }

    // number literal
    std::optional<double> number;
    if (has_digit(aq.tokens[i].text)) number = numeric_value(parse_cell(aq.tokens[i].text));
    const std::size_t number_len = number ? 1 : 0;

    // knowledge base, over content tokens
    SpanMatch kb_match;
    if (!aq.stopword[i]) {
      const std::size_t p = content_pos[i];
      const std::size_t max_len = std::min(index.longest_content(), content.size() - p);
      for (std::size_t len = max_len; len >= 1 && kb_match.entries.empty(); --len) {
        std::vector<std::string> exact, stems, fixed, fixed_stems;
        bool any_fix = false;
        for (std::size_t k = p; k < p + len; ++k) {
          const auto& tok = aq.tokens[content[k]];
          exact.push_back(tok.text);
          stems.push_back(tok.stem);
          fixed.push_back(corrected[content[k]]);
          fixed_stems.push_back(porter_stem(corrected[content[k]]));
          any_fix = any_fix || was_corrected[content[k]];
        }
        std::string key = join(exact, " ");
        const std::vector<std::size_t>* hit = index.by_content(key);
        MatchKind kind = MatchKind::kExact;
        if (!hit) {
          hit = index.by_stem(join(stems, " "));
          kind = MatchKind::kStem;
        }
        if (!hit && any_fix) {
          kind = MatchKind::kSpellCorrected;
          hit = index.by_content(join(fixed, " "));
          if (!hit) hit = index.by_stem(join(fixed_stems, " "));
        }
        if (hit) {
          kb_match.entries = *hit;
          kb_match.kind = kind;
          kb_match.raw_length = content[p + len - 1] - i + 1;
          kb_match.phrase = key;
        }
        if (len == 1) break;
      }
    }

    std::size_t best = std::max({intent_len, number_len, kb_match.raw_length});
    if (best == 0 && !aq.stopword[i] && !has_digit(aq.tokens[i].text)) {
      // partial match against a longer cell or heading
      const std::size_t p = content_pos[i];
      const std::size_t max_len = std::min<std::size_t>(3, content.size() - p);
      for (std::size_t len = max_len; len >= 1; --len) {
        std::vector<std::string> words;
        for (std::size_t k = p; k < p + len; ++k) words.push_back(aq.tokens[content[k]].text);
        std::string key = join(words, " ");
        const auto* hit = index.by_partial(key);
        if (hit && hit->size() <= options.max_partial_entries) {
          kb_match.entries = *hit;
          kb_match.kind = MatchKind::kPartial;
          kb_match.raw_length = content[p + len - 1] - i + 1;
          kb_match.phrase = key;
          best = kb_match.raw_length;
          break;
        }
        if (len == 1) break;
      }
    }

    if (best == 0) {
      ++i;
      continue;
    }
    if (intent_len == best) {
      for (const auto* p : intents) {
        Annotation a;
        a.id = next_id++;
        a.start = i;
        a.length = best;
        a.target = IntentTarget{p->intent};
        a.kind = MatchKind::kExact;
        a.phrase = join(p->tokens, " ");
        a.key = a.phrase;
        a.provenance = "exact syntactic match: intent " + p->intent + " ('" + a.phrase + "')";
        aq.annotations.push_back(std::move(a));
      }
    }
    if (number_len == best) {
      Annotation a;
      a.id = next_id++;
      a.start = i;
      a.length = 1;
      a.target = NumberTarget{*number};
      a.kind = MatchKind::kExact;
      a.phrase = aq.tokens[i].text;
      a.key = a.phrase;
      a.provenance = "exact syntactic match: number " + a.phrase;
      aq.annotations.push_back(std::move(a));
    }
    if (kb_match.raw_length == best) emit_entities(i, kb_match);
    i += best;
  }

  aq.headword = detect_headword(aq.tokens, aq.annotations, lexicon);
  if (aq.headword) {
    // A headword names the answer's type; loose partial matches on it are
    // dropped in favour of the placeholder.
    const Headword hw = *aq.headword;
    std::erase_if(aq.annotations, [&](const Annotation& a) {
      return a.kind == MatchKind::kPartial && a.start < hw.start + hw.length &&
             hw.start < a.start + a.length;
    });
    std::size_t first = n, last = 0;
    for (std::size_t t = aq.headword->start; t < aq.headword->start + aq.headword->length; ++t) {
      bool covered = std::any_of(aq.annotations.begin(), aq.annotations.end(),
                                 [&](const Annotation& a) { return a.covers(t); });
      if (!covered) {
        first = std::min(first, t);
        last = std::max(last, t);
      }
    }
    if (first < n) {
      Annotation a;
      a.id = next_id++;
      a.start = first;
      a.length = last - first + 1;
      a.target = PlaceholderTarget{};
      a.kind = MatchKind::kPlaceholder;
      std::vector<std::string> words;
      for (std::size_t t = first; t <= last; ++t) words.push_back(aq.tokens[t].text);
      a.phrase = join(words, " ");
      a.key = a.phrase;
      a.provenance = "placeholder: headword '" + a.phrase + "'";
      aq.annotations.push_back(std::move(a));
    }
  }

  for (std::size_t t = 0; t < n; ++t) {
    if (aq.stopword[t]) continue;
    bool covered = std::any_of(aq.annotations.begin(), aq.annotations.end(),
                               [&](const Annotation& a) { return a.covers(t); });
    if (!covered) aq.unmatched.push_back(t);
  }
  return aq;
}

AnnotatedQuery annotate(std::string_view question, const KnowledgeBase& kb,
                        const Lexicon& lexicon, const AnnotatorOptions& options) {
  MatchIndex index(kb, lexicon);
  return annotate(question, index, lexicon, options);
}

}  // namespace tabqa
