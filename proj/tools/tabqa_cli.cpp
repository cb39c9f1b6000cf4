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

// tabqa: ask, eval, train, census and serve.

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "tabqa/eval.h"
#include "tabqa/service.h"
#include "tabqa/text.h"

namespace {

using namespace tabqa;

struct Common {
  std::string abduction = "ml";
  std::string data_dir = TABQA_DATA_DIR;
  std::string model;
  std::string weights;
  std::string grammar;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--abduction", c.abduction, "ml, baseline or off")
      ->check(CLI::IsMember({"ml", "baseline", "off"}));
  app->add_option("--data-dir", c.data_dir, "directory with lexicon, grammar and weights");
  app->add_option("--model", c.model, "operand predictor model (ml mode)");
  app->add_option("--weights", c.weights, "scorer weights file");
  app->add_option("--grammar", c.grammar, "grammar file");
}

EngineConfig config_of(const Common& c) {
  EngineConfig config;
  config.abduction = *abduction_mode_from_name(c.abduction);
  config.data_dir = c.data_dir;
  config.model = c.model;
  config.weights = c.weights;
  config.grammar = c.grammar;
  return config;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void print_result(const EngineResult& r, const ComprehendedTable& table) {
  const auto values = r.answer.texts();
  std::cout << "answer: " << (values.empty() ? "(none)" : join(values, " | ")) << "\n";
  const auto& i = r.interpretation;
  if (i.doubt) std::cout << i.message << "\n";
  if (i.type) std::cout << "type: " << question_type_name(*i.type) << "\n";
  if (!i.sql.empty()) std::cout << "query: " << i.sql << "\n";
  std::cout << "terms:\n";
  for (const auto& t : i.terms) {
    std::cout << "  " << std::left << std::setw(16) << t.term;
    if (t.matched) {
      std::cout << provenance_name(*t.provenance);
      if (t.kind) std::cout << " (" << match_kind_name(*t.kind) << ")";
      std::cout << " -> " << t.target;
      if (t.confidence) std::cout << " [confidence " << std::setprecision(3) << *t.confidence << "]";
    } else {
      std::cout << (t.stopword ? "stopword" : "unmatched");
    }
    std::cout << "\n";
  }
  for (const auto& f : i.fills) {
    std::cout << "abduced: " << f.heading << " (" << provenance_name(f.provenance)
              << ", confidence " << std::setprecision(3) << f.confidence << ") from terms "
              << join(f.terms, " ") << "\n";
  }
  std::cout << "cells:";
  for (const auto& c : r.answer.provenance) {
    const auto* col = table.find(c.column);
    std::cout << " " << (col ? col->name : c.column) << "[" << c.row << "]";
  }
  std::cout << "\ncandidates:\n";
  for (std::size_t k = 0; k < r.candidates.size(); ++k) {
    const auto& c = r.candidates[k];
    std::cout << "  #" << k + 1 << " score " << std::fixed << std::setprecision(2) << c.score.total
              << std::defaultfloat << " " << question_type_name(*c.parse.question_type) << " "
              << c.status << (c.chosen ? " *" : "") << "\n      " << structural_key(c.parse)
              << "\n";
  }
  for (const auto& d : i.diagnostics) std::cout << "note: " << d << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Question answering over tables"};
  app.require_subcommand(1);

  Common ask_c, eval_c, train_c, serve_c;

  auto* ask = app.add_subcommand("ask", "answer one question about a table");
  std::string table_path, question;
  bool ask_json = false;
  ask->add_option("--table", table_path, "CSV or TSV table")->required();
  ask->add_option("--question", question, "question text")->required();
  ask->add_flag("--json", ask_json, "print the API payload");
  add_common(ask, ask_c);

  auto* eval = app.add_subcommand("eval", "evaluate on a dataset split");
  std::string eval_root, split = "test", tsv_out;
  std::size_t limit = 0;
  eval->add_option("--dataset", eval_root, "dataset root")->required();
  eval->add_option("--split", split, "train, test or extra");
  eval->add_option("--limit", limit, "evaluate only the first N examples");
  eval->add_option("--tsv", tsv_out, "write per-example results");
  add_common(eval, eval_c);

  auto* train_cmd = app.add_subcommand("train", "train the operand predictor");
  std::string train_root, out_path, export_path;
  std::size_t skip = 0;
  TrainingOptions topts;
  train_cmd->add_option("--dataset", train_root, "dataset root")->required();
  train_cmd->add_option("--out", out_path, "model file to write")->required();
  train_cmd->add_option("--skip", skip, "leave the first N training examples out");
  train_cmd->add_option("--export", export_path, "write the generated examples as TSV");
  train_cmd->add_option("--epochs", topts.epochs);
  train_cmd->add_option("--seed", topts.seed);
  add_common(train_cmd, train_c);
  train_c.abduction = "off";

  auto* census = app.add_subcommand("census", "training split statistics");
  std::string census_root;
  census->add_option("--dataset", census_root, "dataset root")->required();
  Common census_c;
  census_c.abduction = "off";

  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  std::string serve_root, host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--dataset", serve_root, "directory of tables (and split files)")->required();
  add_common(serve, serve_c);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ask->parsed()) {
      Engine engine(config_of(ask_c));
      auto table = engine.prepare(load_csv(table_path));
      EngineResult r = engine.answer(question, *table);
      if (ask_json) {
        std::cout << to_json(r).dump(2) << "\n";
      } else {
        print_result(r, table->table());
      }
      return 0;
    }
    if (eval->parsed()) {
      Engine engine(config_of(eval_c));
      auto examples = load_dataset(eval_root, split);
      if (limit && examples.size() > limit) examples.resize(limit);
      TableCache tables(eval_root, engine);
      EvalReport report = evaluate(engine, tables, examples);
      std::cout << report.to_text();
      if (!tsv_out.empty()) write_file(tsv_out, report.to_tsv());
      return 0;
    }
    if (train_cmd->parsed()) {
      Engine engine(config_of(train_c));
      auto examples = load_dataset(train_root, "train");
      examples.erase(examples.begin(),
                     examples.begin() + static_cast<std::ptrdiff_t>(std::min(skip, examples.size())));
      TableCache tables(train_root, engine);
      auto corpus = build_corpus(engine, tables, examples);
      GenerationStats stats;
      auto data = generate_training_data(corpus, &stats);
      std::cout << "questions " << stats.questions << ", examples " << stats.emitted
                << ", zero-correct " << stats.zero_correct << ", multi-correct "
                << stats.multi_correct << ", skipped " << stats.skipped << "\n";
      if (!export_path.empty()) write_file(export_path, export_corpus(data));
      PredictorModel model = train(data, topts);
      model.save(out_path);
      std::cout << "held-out accuracy " << model.report.heldout_accuracy << " (baseline "
                << model.report.baseline_accuracy << "), best epoch " << model.report.best_epoch
                << ", vocabulary " << model.embeddings().size() << "\n";
      return 0;
    }
    if (census->parsed()) {
      Engine engine(config_of(census_c));
      auto examples = load_dataset(census_root, "train");
      const auto yn = yes_no_census(examples);
      std::cout << "yes/no questions " << yn.questions << ", yes " << yn.yes << " ("
                << 100.0 * yn.yes_fraction() << "%)\n";
      const auto headings = load_headings(census_root, examples);
      for (auto [term, heading] : {std::pair{"movie", "title"}, std::pair{"who", "name"}}) {
        const auto c = association_census(examples, headings, term, heading);
        std::cout << "(" << term << ", " << heading << "): tables " << c.term_tables << " / "
                  << c.heading_tables << ", questions " << c.term_questions << " / "
                  << c.heading_questions << "\n";
      }
      for (const auto& [pair, n] : top_associations(examples, headings, 10, engine.lexicon())) {
        std::cout << "  " << pair.first << " ~ " << pair.second << "\t" << n << "\n";
      }
      return 0;
    }
    if (serve->parsed()) {
      auto engine = std::make_shared<const Engine>(config_of(serve_c));
      Service service(engine, serve_root);
      httplib::Server server;
      service.bind(server);
      std::cout << "listening on " << host << ":" << port << std::endl;
      if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
