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

#include "tabqa/predictor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tabqa/answer_match.h"
#include "tabqa/query.h"
#include "tabqa/text.h"

namespace tabqa {

std::vector<std::string> embedding_terms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& w : word_tokens(normalize(text))) out.push_back(porter_stem(w));
  return out;
}

namespace {

struct EncodedExample {
  std::vector<std::string> query;                 // stemmed terms of W, with repeats
  std::vector<std::vector<std::string>> columns;  // stemmed heading terms per column
  std::size_t correct = 0;
};

EncodedExample encode(const TrainingExample& ex) {
  EncodedExample e;
  for (const auto& t : ex.terms) {
    auto parts = embedding_terms(t);
    e.query.insert(e.query.end(), parts.begin(), parts.end());
  }
  for (const auto& c : ex.columns) e.columns.push_back(embedding_terms(c));
  e.correct = ex.correct;
  return e;
}

std::vector<double> sum_vectors(const std::vector<std::string>& terms, const Embeddings& e) {
  std::vector<double> v(kEmbeddingDim, 0.0);
  for (const auto& t : terms) {
    auto it = e.find(t);
    if (it == e.end()) continue;
    for (std::size_t k = 0; k < kEmbeddingDim; ++k) v[k] += it->second[k];
  }
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    z += p[i];
  }
  for (auto& x : p) x /= z;
  return p;
}

struct Forward {
  std::vector<double> q;
  std::vector<std::vector<double>> cols;
  std::vector<double> p;
  double loss = 0.0;
};

Forward forward(const EncodedExample& ex, const Embeddings& e) {
  Forward f;
  f.q = sum_vectors(ex.query, e);
  std::vector<double> logits;
  for (const auto& c : ex.columns) {
    f.cols.push_back(sum_vectors(c, e));
    logits.push_back(dot(f.q, f.cols.back()));
  }
  f.p = softmax(logits);
  f.loss = -std::log(std::max(f.p[ex.correct], 1e-300));
  return f;
}

// Adds scale * d(loss)/d(e) into grad, only for terms present in e.
double accumulate_gradient(const EncodedExample& ex, const Embeddings& e, Embeddings& grad,
                           double scale) {
  const Forward f = forward(ex, e);
  std::vector<double> dq(kEmbeddingDim, 0.0);
  for (std::size_t c = 0; c < ex.columns.size(); ++c) {
    const double d = f.p[c] - (c == ex.correct ? 1.0 : 0.0);
    for (std::size_t k = 0; k < kEmbeddingDim; ++k) dq[k] += d * f.cols[c][k];
    for (const auto& t : ex.columns[c]) {
      if (!e.count(t)) continue;
      auto& g = grad[t];
      g.resize(kEmbeddingDim, 0.0);
      for (std::size_t k = 0; k < kEmbeddingDim; ++k) g[k] += scale * d * f.q[k];
    }
  }
  for (const auto& t : ex.query) {
    if (!e.count(t)) continue;
    auto& g = grad[t];
    g.resize(kEmbeddingDim, 0.0);
    for (std::size_t k = 0; k < kEmbeddingDim; ++k) g[k] += scale * dq[k];
  }
  return f.loss;
}

Embeddings to_float_precision(const Embeddings& e) {
  Embeddings out = e;
  for (auto& [t, v] : out) {
    for (auto& x : v) x = static_cast<double>(static_cast<float>(x));
  }
  return out;
}

double mean_loss(const std::vector<EncodedExample>& set, const Embeddings& e) {
  if (set.empty()) return 0.0;
  double s = 0.0;
  for (const auto& ex : set) s += forward(ex, e).loss;
  return s / static_cast<double>(set.size());
}

// Little-endian binary helpers.
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f32(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}
void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

class Reader {
 public:
  explicit Reader(std::string_view b) : bytes_(b) {}
  std::uint64_t uint(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  float f32() {
    auto bits = static_cast<std::uint32_t>(uint(4));
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }
  double f64() {
    auto bits = uint(8);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("model file truncated");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'T', 'Q', 'P', 'M'};

}  // namespace

double example_loss(const TrainingExample& ex, const Embeddings& e) {
  return forward(encode(ex), e).loss;
}

double example_loss_and_gradient(const TrainingExample& ex, const Embeddings& e, Embeddings& grad) {
  return accumulate_gradient(encode(ex), e, grad, 1.0);
}

std::string PredictorModel::serialize() const {
  std::string out(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(kEmbeddingDim));
  put_u32(out, static_cast<std::uint32_t>(embeddings_.size()));
  for (const auto& [term, vec] : embeddings_) {
    put_u32(out, static_cast<std::uint32_t>(term.size()));
    out += term;
    for (double x : vec) put_f32(out, static_cast<float>(x));
  }
  put_u32(out, static_cast<std::uint32_t>(epochs));
  put_u64(out, seed);
  put_u32(out, static_cast<std::uint32_t>(report.train_size));
  put_u32(out, static_cast<std::uint32_t>(report.test_size));
  put_f64(out, report.heldout_accuracy);
  put_f64(out, report.baseline_accuracy);
  put_u32(out, static_cast<std::uint32_t>(report.best_epoch));
  put_u32(out, static_cast<std::uint32_t>(report.train_loss.size()));
  for (double x : report.train_loss) put_f64(out, x);
  put_u32(out, static_cast<std::uint32_t>(report.test_loss.size()));
  for (double x : report.test_loss) put_f64(out, x);
  return out;
}

PredictorModel PredictorModel::deserialize(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw std::runtime_error("not a predictor model file");
  }
  Reader r(bytes.substr(4));
  if (r.uint(4) != kVersion) throw std::runtime_error("unsupported model version");
  if (r.uint(4) != kEmbeddingDim) throw std::runtime_error("unexpected embedding dimension");
  PredictorModel m;
  const auto n = r.uint(4);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::string term = r.str(r.uint(4));
    std::vector<double> v(kEmbeddingDim);
    for (auto& x : v) x = r.f32();
    m.embeddings_.emplace(std::move(term), std::move(v));
  }
  m.epochs = static_cast<int>(r.uint(4));
  m.seed = r.uint(8);
  m.report.train_size = r.uint(4);
  m.report.test_size = r.uint(4);
  m.report.heldout_accuracy = r.f64();
  m.report.baseline_accuracy = r.f64();
  m.report.best_epoch = static_cast<int>(r.uint(4));
  for (auto n_loss = r.uint(4); n_loss > 0; --n_loss) m.report.train_loss.push_back(r.f64());
  for (auto n_loss = r.uint(4); n_loss > 0; --n_loss) m.report.test_loss.push_back(r.f64());
  if (!r.done()) throw std::runtime_error("trailing bytes in model file");
  return m;
}

void PredictorModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file " + path.string());
  const std::string bytes = serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

PredictorModel PredictorModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

PredictorModel train(const std::vector<TrainingExample>& examples, const TrainingOptions& options) {
  if (examples.empty()) throw std::invalid_argument("train: no examples");
  std::mt19937_64 rng(options.seed);

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  std::size_t n_train = static_cast<std::size_t>(
      std::llround(options.train_fraction * static_cast<double>(examples.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, examples.size());

  std::vector<EncodedExample> train_set, test_set;
  std::vector<const TrainingExample*> test_raw;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < n_train) {
      train_set.push_back(encode(examples[order[i]]));
    } else {
      test_set.push_back(encode(examples[order[i]]));
      test_raw.push_back(&examples[order[i]]);
    }
  }

  Embeddings e;
  for (const auto& ex : train_set) {
    for (const auto& t : ex.query) e[t];
    for (const auto& c : ex.columns) {
      for (const auto& t : c) e[t];
    }
  }
  // Uniform init from the raw 64-bit stream so results do not depend on the
  // standard library's distribution implementation.
  for (auto& [term, v] : e) {
    v.resize(kEmbeddingDim);
    for (auto& x : v) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x = -options.init_range + 2.0 * options.init_range * u;
    }
  }

  PredictorModel model;
  model.epochs = options.epochs;
  model.seed = options.seed;
  TrainingReport& report = model.report;
  report.train_size = train_set.size();
  report.test_size = test_set.size();

  Embeddings best = e;
  double best_loss = test_set.empty() ? 0.0 : mean_loss(test_set, e);
  report.best_epoch = 0;
  const double scale = 1.0 / static_cast<double>(train_set.size());
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    Embeddings grad;
    double loss = 0.0;
    for (const auto& ex : train_set) loss += accumulate_gradient(ex, e, grad, scale);
    report.train_loss.push_back(loss * scale);
    for (auto& [term, g] : grad) {
      auto& v = e[term];
      for (std::size_t k = 0; k < kEmbeddingDim; ++k) v[k] -= options.learning_rate * g[k];
    }
    if (!test_set.empty()) {
      const double held = mean_loss(test_set, e);
      report.test_loss.push_back(held);
      if (!options.early_stop || held < best_loss) {
        best_loss = held;
        best = e;
        report.best_epoch = epoch;
      }
    }
  }
  if (test_set.empty() || !options.early_stop) {
    best = e;
    report.best_epoch = options.epochs;
  }
  model.mutable_embeddings() = to_float_precision(best);

  std::size_t right = 0, baseline_right = 0;
  for (const auto* ex : test_raw) {
    const Prediction p = predict(model, ex->terms, ex->columns);
    const std::size_t guess = p.all_oov ? ex->baseline : p.argmax;
    right += guess == ex->correct;
    baseline_right += ex->baseline == ex->correct;
  }
  if (!test_raw.empty()) {
    report.heldout_accuracy = static_cast<double>(right) / static_cast<double>(test_raw.size());
    report.baseline_accuracy =
        static_cast<double>(baseline_right) / static_cast<double>(test_raw.size());
  }
  return model;
}

Prediction predict(const PredictorModel& model, const std::vector<std::string>& terms,
                   const std::vector<std::string>& columns) {
  if (columns.empty()) throw std::invalid_argument("predict: no columns");
  TrainingExample ex{terms, columns, 0, 0};
  const EncodedExample enc = encode(ex);
  const Forward f = forward(enc, model.embeddings());
  Prediction p;
  p.probabilities = f.p;
  p.argmax = static_cast<std::size_t>(
      std::max_element(p.probabilities.begin(), p.probabilities.end()) - p.probabilities.begin());
  p.confidence = p.probabilities[p.argmax];
  p.all_oov = std::none_of(enc.query.begin(), enc.query.end(),
                           [&](const std::string& t) { return model.has_term(t); });
  return p;
}

std::string baseline_leftmost_string(const ComprehendedTable& table) {
  for (const auto* c : table.dimension_columns()) {
    bool typed = false;
    for (const auto& other : table.columns) {
      if (&other != c && other.origin.source == c->origin.source &&
          other.role != ColumnRole::kDimension) {
        typed = true;
      }
      if (&other != c && other.origin.source == c->origin.source && other.origin.part > 0) {
        typed = true;
      }
    }
    if (!typed) return c->id;
  }
  throw std::invalid_argument("table has no string-valued column");
}

std::string_view abduction_mode_name(AbductionMode m) {
  switch (m) {
    case AbductionMode::kMl: return "ml";
    case AbductionMode::kBaseline: return "baseline";
    case AbductionMode::kOff: return "off";
  }
  return "?";
}

std::optional<AbductionMode> abduction_mode_from_name(std::string_view name) {
  for (auto m : {AbductionMode::kMl, AbductionMode::kBaseline, AbductionMode::kOff}) {
    if (abduction_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<const ComprehendedColumn*> eligible_columns(const SemanticParse& parse,
                                                        const MissingSlot& slot,
                                                        const ComprehendedTable& table) {
  std::vector<const ComprehendedColumn*> pool;
  switch (slot.eligible) {
    case Eligibility::kDimensionColumns:
      pool = table.dimension_columns();
      break;
    case Eligibility::kMetricColumns:
      pool = table.metric_columns(false);
      break;
    case Eligibility::kAnyColumn:
      pool = table.dimension_columns();
      pool.push_back(&table.row_id());
      break;
    case Eligibility::kNone:
      return {};
  }
  auto used = [&](const ComprehendedColumn* c) {
    for (const auto* slots : {&parse.dimensions, &parse.metrics}) {
      for (const auto& s : *slots) {
        if (s.column == c->id) return true;
      }
    }
    return false;
  };
  std::erase_if(pool, used);
  return pool;
}

SemanticParse fill_slot(const SemanticParse& parse, const MissingSlot& slot,
                        const ComprehendedColumn& column, AbductionFill fill) {
  SemanticParse p = parse;
  if (slot.target && !p.holes.empty()) {
    fill.placeholder = p.holes.front();
    p.holes.erase(p.holes.begin());
  }
  ColumnSlot s{column.id, {}, slot.target, std::move(fill)};
  auto& slots = column.role == ColumnRole::kMetric ? p.metrics : p.dimensions;
  if (slot.target) {
    slots.insert(slots.begin(), std::move(s));
  } else {
    slots.push_back(std::move(s));
  }
  return p;
}

AbductionResult abduct(const SemanticParse& parse, const MissingOperandReport& report,
                       const PredictorModel* model, const ComprehendedTable& table,
                       AbductionMode mode) {
  AbductionResult result{parse, report.complete(), 0};
  if (report.complete() || mode == AbductionMode::kOff) return result;
  bool all_filled = report.missing_filters() == 0;
  for (const auto& slot : report.missing) {
    if (slot.kind == SlotKind::kFilter) continue;
    auto pool = eligible_columns(result.parse, slot, table);
    if (pool.size() < static_cast<std::size_t>(slot.count)) {
      all_filled = false;
      continue;
    }
    std::vector<std::size_t> ranked(pool.size());
    std::iota(ranked.begin(), ranked.end(), 0);
    std::vector<double> confidence(pool.size(), 1.0 / static_cast<double>(pool.size()));
    bool learnt = false;
    if (mode == AbductionMode::kMl && model) {
      std::vector<std::string> headings;
      for (const auto* c : pool) headings.push_back(c->name);
      const Prediction pred = predict(*model, report.terms, headings);
      if (!pred.all_oov) {
        learnt = true;
        confidence = pred.probabilities;
        std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
          return confidence[a] > confidence[b];
        });
      }
    }
    if (!learnt) {
      // Rule-based: the left-most string column first, then table order.
      std::string base;
      try {
        base = baseline_leftmost_string(table);
      } catch (const std::invalid_argument&) {
      }
      std::stable_partition(ranked.begin(), ranked.end(),
                            [&](std::size_t i) { return pool[i]->id == base; });
    }
    for (int k = 0; k < slot.count; ++k) {
      const std::size_t i = ranked[static_cast<std::size_t>(k)];
      AbductionFill fill;
      fill.kind = learnt ? ProvenanceKind::kMachineLearntAbductive
                         : ProvenanceKind::kRuleBasedAbductive;
      fill.confidence = confidence[i];
      fill.terms = report.terms;
      MissingSlot one = slot;
      one.count = 1;
      result.parse = fill_slot(result.parse, one, *pool[i], fill);
      ++result.fills;
    }
  }
  result.complete = all_filled;
  return result;
}

std::size_t count_correct_substitutions(const CorpusItem& item,
                                        std::vector<std::size_t>* correct_indices) {
  const QuestionType type = item.parse.question_type.value_or(classify(item.aq, item.parse));
  const MissingOperandReport report = find_missing(item.parse, type, item.aq);
  const MissingSlot* slot = nullptr;
  for (const auto& m : report.missing) {
    if (m.kind != SlotKind::kFilter) slot = &m;
  }
  if (!slot) return 0;
  auto pool = eligible_columns(item.parse, *slot, *item.table);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    MissingSlot one = *slot;
    one.count = 1;
    SemanticParse filled = fill_slot(item.parse, one, *pool[i], AbductionFill{});
    filled.question_type = type;
    bool ok = false;
    try {
      const QueryPlan plan = build_plan(filled, *item.table);
      const Answer answer =
          normalize_answer(execute(plan, *item.table), type, item.aq.headword_plural());
      ok = answer_match(answer, item.gold);
    } catch (const PlanError&) {
      ok = false;
    }
    if (ok) {
      ++correct;
      if (correct_indices) correct_indices->push_back(i);
    }
  }
  return correct;
}

std::vector<TrainingExample> generate_training_data(const std::vector<CorpusItem>& corpus,
                                                    GenerationStats* stats) {
  GenerationStats local;
  std::vector<TrainingExample> out;
  for (const auto& item : corpus) {
    ++local.questions;
    const QuestionType type = item.parse.question_type.value_or(classify(item.aq, item.parse));
    const MissingOperandReport report = find_missing(item.parse, type, item.aq);
    const MissingSlot* slot = nullptr;
    int column_slots = 0;
    for (const auto& m : report.missing) {
      if (m.kind != SlotKind::kFilter) {
        slot = &m;
        column_slots += m.count;
      }
    }
    if (!slot || column_slots != 1 || report.missing_filters() > 0 || report.terms.empty()) {
      ++local.skipped;
      continue;
    }
    std::vector<std::size_t> correct;
    count_correct_substitutions(item, &correct);
    if (correct.empty()) {
      ++local.zero_correct;
      continue;
    }
    if (correct.size() > 1) {
      ++local.multi_correct;
      continue;
    }
    auto pool = eligible_columns(item.parse, *slot, *item.table);
    TrainingExample ex;
    ex.terms = report.terms;
    std::string base;
    try {
      base = baseline_leftmost_string(*item.table);
    } catch (const std::invalid_argument&) {
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      ex.columns.push_back(pool[i]->name);
      if (pool[i]->id == base) ex.baseline = i;
    }
    ex.correct = correct.front();
    out.push_back(std::move(ex));
    ++local.emitted;
  }
  if (stats) *stats = local;
  return out;
}

std::string export_corpus(const std::vector<TrainingExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    out += join(ex.terms, "|") + "\t" + join(ex.columns, "|") + "\t" + std::to_string(ex.correct) +
           "\n";
  }
  return out;
}

}  // namespace tabqa
