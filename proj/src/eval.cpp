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

#include "tabqa/eval.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tabqa/answer_match.h"
#include "tabqa/text.h"

namespace tabqa {

const std::vector<SplitInfo>& dataset_splits() {
  static const std::vector<SplitInfo> kSplits = {
      {"train", "data/training.tsv", 14152},
      {"test", "data/pristine-unseen-tables.tsv", 4344},
      {"extra", "data/pristine-seen-tables.tsv", 3537},
  };
  return kSplits;
}

namespace {

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char e = s[++i];
      out += e == 'n' ? '\n' : e == 'p' ? '|' : e;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DatasetError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string tsv_field(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n') c = ' ';
  }
  return s;
}

}  // namespace

std::vector<EvalExample> parse_examples(std::string_view tsv) {
  std::vector<EvalExample> out;
  bool header = true;
  std::size_t line_no = 0;
  for (const auto& raw : split(tsv, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.substr(0, 3) == "id\t") continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() < 4) {
      throw DatasetError("line " + std::to_string(line_no) + ": expected 4 fields, found " +
                         std::to_string(fields.size()));
    }
    EvalExample ex;
    ex.id = fields[0];
    ex.question = unescape(fields[1]);
    ex.table = fields[2];
    for (const auto& v : split(fields[3], '|')) ex.gold.push_back(unescape(v));
    if (ex.gold.empty() || (ex.gold.size() == 1 && ex.gold[0].empty())) {
      throw DatasetError("line " + std::to_string(line_no) + ": empty gold answer");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<EvalExample> load_dataset(const std::filesystem::path& root, std::string_view split) {
  const auto& splits = dataset_splits();
  auto it = std::find_if(splits.begin(), splits.end(),
                         [&](const SplitInfo& s) { return s.name == split; });
  if (it == splits.end()) {
    throw DatasetError("unknown split '" + std::string(split) + "' (expected train, test or extra)");
  }
  const auto path = root / it->file;
  if (!std::filesystem::exists(path)) throw DatasetError("missing split file " + path.string());
  auto examples = parse_examples(read_all(path));
  std::unordered_set<std::string> checked;
  for (const auto& ex : examples) {
    if (!checked.insert(ex.table).second) continue;
    if (!std::filesystem::exists(root / ex.table)) {
      throw DatasetError("example " + ex.id + ": missing table " + (root / ex.table).string());
    }
  }
  if (examples.size() != it->expected) {
    throw DatasetError("split " + it->name + ": expected " + std::to_string(it->expected) +
                       " examples, found " + std::to_string(examples.size()));
  }
  return examples;
}

TableCache::TableCache(std::filesystem::path root, const Engine& engine)
    : root_(std::move(root)), engine_(&engine) {}

std::shared_ptr<const PreparedTable> TableCache::get(const std::string& relative) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(relative);
    if (it != tables_.end()) return it->second;
  }
  // The escaped .tsv sibling is unambiguous where the .csv quoting is not.
  auto path = root_ / relative;
  auto tsv = path;
  tsv.replace_extension(".tsv");
  if (path.extension() == ".csv" && std::filesystem::exists(tsv)) path = tsv;
  RawTable raw = load_csv(path);
  raw.name = relative;
  auto prepared = engine_->prepare(raw);
  std::lock_guard<std::mutex> lock(mu_);
  return tables_.emplace(relative, std::move(prepared)).first->second;
}

void EvalReport::merge(const EvalReport& o) {
  total += o.total;
  correct += o.correct;
  errors += o.errors;
  abduction_used += o.abduction_used;
  candidate_sum += o.candidate_sum;
  for (const auto& [k, v] : o.by_type) {
    by_type[k].total += v.total;
    by_type[k].correct += v.correct;
  }
  for (const auto& [k, v] : o.unmatched_terms) unmatched_terms[k] += v;
  records.insert(records.end(), o.records.begin(), o.records.end());
}

std::vector<std::pair<std::string, std::size_t>> EvalReport::top_unmatched(std::size_t k) const {
  std::vector<std::pair<std::string, std::size_t>> v(unmatched_terms.begin(), unmatched_terms.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (v.size() > k) v.resize(k);
  return v;
}

std::string EvalReport::to_tsv() const {
  std::string out = "id\tquestion\ttype\tpredicted\tgold\tcorrect\tabduction\tcandidates\terror\n";
  for (const auto& r : records) {
    out += tsv_field(r.id) + "\t" + tsv_field(r.question) + "\t" + r.type + "\t" +
           tsv_field(join(r.predicted, "|")) + "\t" + tsv_field(join(r.gold, "|")) + "\t" +
           (r.correct ? "1" : "0") + "\t" + (r.abduction_used ? "1" : "0") + "\t" +
           std::to_string(r.candidates) + "\t" + tsv_field(r.error) + "\n";
  }
  return out;
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "abduction: " << abduction << "\n";
  os << "accuracy: " << correct << " / " << total << " = " << 100.0 * accuracy() << "%\n";
  os << "errors: " << errors << "\n";
  os << "abduction used: " << abduction_used << "\n";
  os << "average candidate parses: " << average_candidates() << "\n";
  os << "\n" << std::left << std::setw(12) << "type" << std::right << std::setw(8) << "total"
     << std::setw(9) << "correct" << std::setw(10) << "accuracy" << "\n";
  for (const auto& [type, c] : by_type) {
    os << std::left << std::setw(12) << type << std::right << std::setw(8) << c.total
       << std::setw(9) << c.correct << std::setw(9)
       << (c.total ? 100.0 * double(c.correct) / double(c.total) : 0.0) << "%\n";
  }
  os << "\nmost frequent unmatched terms:\n";
  for (const auto& [term, n] : top_unmatched(20)) os << "  " << term << "\t" << n << "\n";
  return os.str();
}

EvalRecord evaluate_one(const Engine& engine, TableCache& tables, const EvalExample& example,
                        std::map<std::string, std::size_t>* unmatched) {
  EvalRecord r;
  r.id = example.id;
  r.question = example.question;
  r.gold = example.gold;
  r.type = "none";
  try {
    const auto table = tables.get(example.table);
    const EngineResult res = engine.answer(example.question, *table);
    r.predicted = res.answer.texts();
    r.correct = answer_match(res.answer, example.gold);
    r.abduction_used = res.abduction_used;
    r.candidates = res.candidates.size();
    for (const auto& c : res.candidates) {
      if (c.chosen) r.type = std::string(question_type_name(*c.parse.question_type));
    }
    if (unmatched) {
      for (const auto& t : res.annotated.unmatched_terms()) ++(*unmatched)[t];
    }
  } catch (const std::exception& e) {
    r.error = e.what();
    r.correct = false;
  }
  return r;
}

EvalReport evaluate(const Engine& engine, TableCache& tables,
                    const std::vector<EvalExample>& examples) {
  EvalReport report;
  report.abduction = std::string(abduction_mode_name(engine.config().abduction));
  for (const auto& ex : examples) {
    EvalRecord r = evaluate_one(engine, tables, ex, &report.unmatched_terms);
    ++report.total;
    report.correct += r.correct;
    report.errors += !r.error.empty();
    report.abduction_used += r.abduction_used;
    report.candidate_sum += r.candidates;
    auto& t = report.by_type[r.type];
    ++t.total;
    t.correct += r.correct;
    report.records.push_back(std::move(r));
  }
  return report;
}

YesNoCensus yes_no_census(const std::vector<EvalExample>& examples) {
  YesNoCensus c;
  for (const auto& ex : examples) {
    if (ex.gold.size() != 1) continue;
    const std::string g = normalize(ex.gold[0]);
    if (g == "yes") {
      ++c.questions;
      ++c.yes;
    } else if (g == "no") {
      ++c.questions;
      ++c.no;
    }
  }
  return c;
}

TableHeadings load_headings(const std::filesystem::path& root,
                            const std::vector<EvalExample>& examples) {
  TableHeadings out;
  for (const auto& ex : examples) {
    if (out.count(ex.table)) continue;
    auto path = root / ex.table;
    auto tsv = path;
    tsv.replace_extension(".tsv");
    if (path.extension() == ".csv" && std::filesystem::exists(tsv)) path = tsv;
    std::vector<std::string> headings;
    try {
      for (const auto& h : load_csv(path).header) headings.push_back(normalize(h));
    } catch (const LoadError&) {
    }
    out.emplace(ex.table, std::move(headings));
  }
  return out;
}

namespace {

bool has_heading(const TableHeadings& headings, const std::string& table, const std::string& h) {
  auto it = headings.find(table);
  return it != headings.end() && std::find(it->second.begin(), it->second.end(), h) != it->second.end();
}

}  // namespace

AssociationCount association_census(const std::vector<EvalExample>& examples,
                                    const TableHeadings& headings, std::string_view term,
                                    std::string_view heading) {
  const std::string t = normalize(term), h = normalize(heading);
  AssociationCount c;
  std::set<std::string> tables;
  for (const auto& ex : examples) {
    const auto words = word_tokens(normalize(ex.question));
    if (std::find(words.begin(), words.end(), t) == words.end()) continue;
    ++c.term_questions;
    const bool has = has_heading(headings, ex.table, h);
    c.heading_questions += has;
    if (tables.insert(ex.table).second) c.heading_tables += has;
  }
  c.term_tables = tables.size();
  return c;
}

std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> top_associations(
    const std::vector<EvalExample>& examples, const TableHeadings& headings, std::size_t k,
    const Lexicon& lexicon) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (const auto& ex : examples) {
    auto it = headings.find(ex.table);
    if (it == headings.end()) continue;
    auto words = word_tokens(normalize(ex.question));
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    std::set<std::string> table_headings(it->second.begin(), it->second.end());
    for (const auto& w : words) {
      if (lexicon.is_stopword(w) && !Lexicon::is_question_word(w)) continue;
      for (const auto& h : table_headings) ++counts[{w, h}];
    }
  }
  std::vector<std::pair<std::pair<std::string, std::string>, std::size_t>> v(counts.begin(),
                                                                           counts.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (v.size() > k) v.resize(k);
  return v;
}

std::vector<CorpusItem> build_corpus(const Engine& engine, TableCache& tables,
                                     const std::vector<EvalExample>& examples) {
  std::vector<CorpusItem> out;
  for (const auto& ex : examples) {
    std::shared_ptr<const PreparedTable> table;
    try {
      table = tables.get(ex.table);
    } catch (const std::exception&) {
      continue;
    }
    AnnotatedQuery aq = annotate(ex.question, table->index(), engine.lexicon());
    auto ranked = engine.candidates(aq, table->table());
    if (ranked.empty()) continue;
    CorpusItem item{std::move(aq), std::move(ranked.front().parse), &table->table(), ex.gold};
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace tabqa
