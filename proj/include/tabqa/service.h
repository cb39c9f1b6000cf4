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

// JSON payloads and the HTTP API.
//
//   POST /answer      {"question", "tableId", "abduction"?}
//   GET  /tables      table catalog
//   GET  /tables/{id} comprehended schema and rows
//   POST /eval        {"split", "limit"?, "abduction"?} or {"examples": [...]}
//   GET  /eval/{id}   job status and report
//   GET  /health      "ok"
//
// Errors carry {"error": {"status", "message"}}.

#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "tabqa/engine.h"
#include "tabqa/eval.h"

namespace httplib {
class Server;
}

namespace tabqa {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const TypedValue& v);
nlohmann::json to_json(const Answer& a);
nlohmann::json to_json(const SemanticParse& p);
nlohmann::json to_json(const ScoreBreakdown& s);
nlohmann::json to_json(const MissingOperandReport& r);
nlohmann::json to_json(const Interpretation& i);
nlohmann::json to_json(const EngineResult& r);
nlohmann::json to_json(const EvalReport& r, bool with_records);
nlohmann::json table_json(const std::string& id, const ComprehendedTable& t);

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

class Service {
 public:
  // Serves the tables found under `root` (recursively, *.csv). Split files
  // for /eval are looked up under the same root.
  Service(std::shared_ptr<const Engine> engine, std::filesystem::path root);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpReply answer(const std::string& body);
  HttpReply tables() const;
  HttpReply table(const std::string& id);
  HttpReply start_eval(const std::string& body);
  HttpReply eval_status(const std::string& id);

  // Blocks until every eval job has finished.
  void wait_for_jobs();

  void bind(httplib::Server& server);

 private:
  struct Job {
    std::string status = "running";  // running, done, failed
    nlohmann::json report;
    std::string error;
  };

  const Engine& engine_for(AbductionMode mode);

  std::shared_ptr<const Engine> engine_;
  std::filesystem::path root_;
  std::vector<std::string> catalog_;
  std::mutex mu_;
  std::map<AbductionMode, std::shared_ptr<const Engine>> engines_;
  std::unique_ptr<TableCache> cache_;
  std::map<std::string, Job> jobs_;
  std::vector<std::thread> workers_;
  int next_job_ = 1;
};

}  // namespace tabqa
