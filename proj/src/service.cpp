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

#include "tabqa/service.h"

#include <algorithm>

#include "httplib.h"

namespace tabqa {

using nlohmann::json;

namespace {

json ids(const std::vector<int>& v) { return json(v); }

json slot_json(const ColumnSlot& s) {
  json j{{"column", s.column}, {"target", s.target}, {"provenance", ids(s.provenance)}};
  if (s.abduced) {
    j["abduced"] = {{"kind", provenance_name(s.abduced->kind)},
                    {"confidence", s.abduced->confidence},
                    {"terms", s.abduced->terms},
                    {"placeholder", s.abduced->placeholder}};
  }
  return j;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json cell_refs(const std::vector<CellRef>& refs) {
  json out = json::array();
  for (const auto& r : refs) out.push_back({{"column", r.column}, {"row", r.row}});
  return out;
}

HttpReply error(int status, const std::string& message) {
  return {status, {{"error", {{"status", status}, {"message", message}}}}};
}

std::optional<json> parse_body(const std::string& body, HttpReply& err) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) {
      err = error(400, "request body must be a JSON object");
      return std::nullopt;
    }
    return j;
  } catch (const json::parse_error& e) {
    err = error(400, std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
}

std::optional<AbductionMode> mode_field(const json& body, AbductionMode fallback, HttpReply& err) {
  if (!body.contains("abduction")) return fallback;
  if (!body["abduction"].is_string()) {
    err = error(400, "abduction must be a string");
    return std::nullopt;
  }
  auto m = abduction_mode_from_name(body["abduction"].get<std::string>());
  if (!m) err = error(400, "abduction must be one of ml, baseline, off");
  return m;
}

}  // namespace

json to_json(const TypedValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EmptyValue>) {
          return {{"type", "empty"}, {"text", ""}};
        } else if constexpr (std::is_same_v<T, TextValue>) {
          return {{"type", "text"}, {"text", x.text}};
        } else if constexpr (std::is_same_v<T, NumberValue>) {
          return {{"type", "number"}, {"text", display(x)}, {"value", x.value}, {"unit", x.unit}};
        } else if constexpr (std::is_same_v<T, DateValue>) {
          return {{"type", "date"},
                  {"text", display(x)},
                  {"year", x.year ? json(*x.year) : json(nullptr)},
                  {"month", x.month ? json(*x.month) : json(nullptr)},
                  {"day", x.day ? json(*x.day) : json(nullptr)}};
        } else if constexpr (std::is_same_v<T, TimeValue>) {
          return {{"type", "time"}, {"text", display(x)}, {"seconds", x.seconds}};
        } else {
          return {{"type", "score"}, {"text", display(x)}, {"for", x.points_for},
                  {"against", x.points_against}};
        }
      },
      v);
}

json to_json(const Answer& a) {
  json j{{"provenance", cell_refs(a.provenance)}, {"values", a.texts()}};
  if (a.is_none()) {
    j["kind"] = "none";
  } else if (const auto* s = std::get_if<Answer::Scalar>(&a.value)) {
    j["kind"] = "scalar";
    j["typed"] = json::array({to_json(*s)});
  } else if (const auto* l = std::get_if<Answer::List>(&a.value)) {
    j["kind"] = "list";
    j["typed"] = json::array();
    for (const auto& v : *l) j["typed"].push_back(to_json(v));
  } else {
    j["kind"] = "boolean";
  }
  return j;
}

json to_json(const SemanticParse& p) {
  json j;
  j["type"] = p.question_type ? json(question_type_name(*p.question_type)) : json(nullptr);
  j["answer_kind"] = answer_kind_name(p.answer_kind);
  j["metrics"] = json::array();
  for (const auto& s : p.metrics) j["metrics"].push_back(slot_json(s));
  j["dimensions"] = json::array();
  for (const auto& s : p.dimensions) j["dimensions"].push_back(slot_json(s));
  j["filters"] = json::array();
  for (const auto& f : p.filters) {
    j["filters"].push_back({{"text", describe_filter(f)}, {"provenance", ids(f.provenance)}});
  }
  j["date_range"] = p.date_range ? json{{"after", optional_number(p.date_range->after)},
                                        {"before", optional_number(p.date_range->before)}}
                                 : json(nullptr);
  j["sort"] = p.sort ? json{{"column", p.sort->column},
                            {"direction", p.sort->direction == SortDirection::kAscending ? "asc"
                                                                                          : "desc"}}
                     : json(nullptr);
  j["limit"] = p.limit ? json(*p.limit) : json(nullptr);
  j["aggregation"] = p.aggregation ? json(aggregation_name(*p.aggregation)) : json(nullptr);
  j["intents"] = p.intents;
  j["holes"] = ids(p.holes);
  j["numbers"] = p.numbers;
  j["rules"] = p.rules;
  j["provenance"] = ids(p.provenance);
  j["key"] = structural_key(p);
  return j;
}

json to_json(const ScoreBreakdown& s) {
  json features, contributions;
  const auto f = s.features();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    features[std::string(kFeatureNames[i])] = f[i];
    contributions[std::string(kFeatureNames[i])] = s.contributions[i];
  }
  return {{"total", s.total}, {"features", features}, {"contributions", contributions}};
}

json to_json(const MissingOperandReport& r) {
  json missing = json::array();
  for (const auto& m : r.missing) {
    missing.push_back({{"kind", slot_kind_name(m.kind)}, {"count", m.count}, {"target", m.target}});
  }
  return {{"type", question_type_name(r.type)}, {"missing", missing}, {"terms", r.terms},
          {"complete", r.complete()}};
}

json to_json(const Interpretation& i) {
  json terms = json::array();
  for (const auto& t : i.terms) {
    json e{{"token", t.token}, {"term", t.term}, {"matched", t.matched}, {"stopword", t.stopword},
           {"target", t.target}};
    e["provenance"] = t.provenance ? json(provenance_name(*t.provenance)) : json(nullptr);
    e["kind"] = t.kind ? json(match_kind_name(*t.kind)) : json(nullptr);
    e["confidence"] = optional_number(t.confidence);
    terms.push_back(std::move(e));
  }
  json fills = json::array();
  for (const auto& f : i.fills) {
    fills.push_back({{"column", f.column},
                     {"heading", f.heading},
                     {"provenance", provenance_name(f.provenance)},
                     {"confidence", f.confidence},
                     {"terms", f.terms},
                     {"placeholder_token",
                      f.placeholder_token ? json(*f.placeholder_token) : json(nullptr)}});
  }
  return {{"question", i.question},
          {"rewritten", i.rewritten},
          {"terms", terms},
          {"fills", fills},
          {"parse", i.parse ? to_json(*i.parse) : json(nullptr)},
          {"type", i.type ? json(question_type_name(*i.type)) : json(nullptr)},
          {"sql", i.sql},
          {"doubt", i.doubt},
          {"message", i.message},
          {"diagnostics", i.diagnostics}};
}

json to_json(const EngineResult& r) {
  json candidates = json::array();
  for (std::size_t k = 0; k < r.candidates.size(); ++k) {
    const auto& c = r.candidates[k];
    candidates.push_back({{"rank", k + 1},
                          {"parse", to_json(c.parse)},
                          {"score", to_json(c.score)},
                          {"missing", to_json(c.missing)},
                          {"chosen", c.chosen},
                          {"status", c.status}});
  }
  return {{"schema_version", kSchemaVersion},
          {"answer", to_json(r.answer)},
          {"interpretation", to_json(r.interpretation)},
          {"candidates", candidates},
          {"abduction_used", r.abduction_used}};
}

json to_json(const EvalReport& r, bool with_records) {
  json by_type;
  for (const auto& [k, v] : r.by_type) by_type[k] = {{"total", v.total}, {"correct", v.correct}};
  json unmatched = json::array();
  for (const auto& [t, n] : r.top_unmatched(50)) unmatched.push_back({{"term", t}, {"count", n}});
  json j{{"schema_version", kSchemaVersion},
         {"abduction", r.abduction},
         {"total", r.total},
         {"correct", r.correct},
         {"accuracy", r.accuracy()},
         {"errors", r.errors},
         {"abduction_used", r.abduction_used},
         {"average_candidates", r.average_candidates()},
         {"by_type", by_type.is_null() ? json::object() : by_type},
         {"unmatched_terms", unmatched}};
  if (with_records) {
    json records = json::array();
    for (const auto& x : r.records) {
      records.push_back({{"id", x.id},
                         {"question", x.question},
                         {"type", x.type},
                         {"predicted", x.predicted},
                         {"gold", x.gold},
                         {"correct", x.correct},
                         {"abduction_used", x.abduction_used},
                         {"candidates", x.candidates},
                         {"error", x.error}});
    }
    j["records"] = records;
  }
  return j;
}

json table_json(const std::string& id, const ComprehendedTable& t) {
  json columns = json::array();
  for (const auto& c : t.columns) {
    columns.push_back({{"id", c.id},
                       {"name", c.name},
                       {"role", role_name(c.role)},
                       {"source", c.origin.source},
                       {"part", c.origin.part}});
  }
  json rows = json::array();
  for (std::size_t r = 0; r < t.row_count; ++r) {
    json row = json::array();
    for (const auto& c : t.columns) row.push_back(r < c.values.size() ? display(c.values[r]) : "");
    rows.push_back(std::move(row));
  }
  return {{"schema_version", kSchemaVersion},
          {"id", id},
          {"source_header", t.source_header},
          {"columns", columns},
          {"rows", rows},
          {"body_rows", t.body_rows},
          {"total_rows", t.total_rows},
          {"warnings", t.warnings}};
}

Service::Service(std::shared_ptr<const Engine> engine, std::filesystem::path root)
    : engine_(std::move(engine)), root_(std::move(root)) {
  engines_[engine_->config().abduction] = engine_;
  cache_ = std::make_unique<TableCache>(root_, *engine_);
  if (std::filesystem::is_directory(root_)) {
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root_)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        catalog_.push_back(std::filesystem::relative(entry.path(), root_).generic_string());
      }
    }
  }
  std::sort(catalog_.begin(), catalog_.end());
}

Service::~Service() { wait_for_jobs(); }

void Service::wait_for_jobs() {
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

const Engine& Service::engine_for(AbductionMode mode) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = engines_.find(mode);
  if (it != engines_.end()) return *it->second;
  EngineConfig config = engine_->config();
  config.abduction = mode;
  auto engine = std::make_shared<const Engine>(config, engine_->shared_model());
  return *engines_.emplace(mode, std::move(engine)).first->second;
}

HttpReply Service::answer(const std::string& body) {
  HttpReply err;
  auto req = parse_body(body, err);
  if (!req) return err;
  if (!req->contains("question") || !(*req)["question"].is_string()) {
    return error(400, "question (string) is required");
  }
  if (!req->contains("tableId") || !(*req)["tableId"].is_string()) {
    return error(400, "tableId (string) is required");
  }
  const std::string question = (*req)["question"];
  const std::string id = (*req)["tableId"];
  if (!std::binary_search(catalog_.begin(), catalog_.end(), id)) {
    return error(404, "unknown table: " + id);
  }
  auto mode = mode_field(*req, engine_->config().abduction, err);
  if (!mode) return err;
  try {
    const Engine& engine = engine_for(*mode);
    auto table = cache_->get(id);
    return {200, to_json(engine.answer(question, *table))};
  } catch (const ConfigError& e) {
    return error(422, e.what());
  } catch (const LoadError& e) {
    return error(422, e.what());
  }
}

HttpReply Service::tables() const {
  json list = json::array();
  for (const auto& id : catalog_) list.push_back({{"id", id}});
  return {200, {{"schema_version", kSchemaVersion}, {"tables", list}}};
}

HttpReply Service::table(const std::string& id) {
  if (!std::binary_search(catalog_.begin(), catalog_.end(), id)) {
    return error(404, "unknown table: " + id);
  }
  try {
    return {200, table_json(id, cache_->get(id)->table())};
  } catch (const LoadError& e) {
    return error(422, e.what());
  }
}

HttpReply Service::start_eval(const std::string& body) {
  HttpReply err;
  auto req = parse_body(body, err);
  if (!req) return err;
  auto mode = mode_field(*req, engine_->config().abduction, err);
  if (!mode) return err;

  std::vector<EvalExample> examples;
  try {
    if (req->contains("examples")) {
      const json& list = (*req)["examples"];
      if (!list.is_array()) return error(400, "examples must be an array");
      for (const auto& e : list) {
        EvalExample ex;
        ex.id = e.value("id", std::to_string(examples.size()));
        ex.question = e.at("question").get<std::string>();
        ex.table = e.at("tableId").get<std::string>();
        ex.gold = e.at("gold").get<std::vector<std::string>>();
        if (!std::binary_search(catalog_.begin(), catalog_.end(), ex.table)) {
          return error(404, "unknown table: " + ex.table);
        }
        examples.push_back(std::move(ex));
      }
    } else if (req->contains("split") && (*req)["split"].is_string()) {
      examples = load_dataset(root_, (*req)["split"].get<std::string>());
    } else {
      return error(400, "either split (string) or examples (array) is required");
    }
  } catch (const json::exception& e) {
    return error(400, std::string("malformed example: ") + e.what());
  } catch (const DatasetError& e) {
    return error(422, e.what());
  }
  if (req->contains("limit")) {
    if (!(*req)["limit"].is_number_unsigned()) return error(400, "limit must be a non-negative integer");
    const auto limit = (*req)["limit"].get<std::size_t>();
    if (examples.size() > limit) examples.resize(limit);
  }

  const Engine* engine = nullptr;
  try {
    engine = &engine_for(*mode);
  } catch (const ConfigError& e) {
    return error(422, e.what());
  }

  std::lock_guard<std::mutex> lock(mu_);
  const std::string id = "eval-" + std::to_string(next_job_++);
  jobs_[id] = Job{};
  workers_.emplace_back([this, id, engine, examples = std::move(examples)] {
    Job done;
    try {
      done.report = to_json(evaluate(*engine, *cache_, examples), true);
      done.status = "done";
    } catch (const std::exception& e) {
      done.status = "failed";
      done.error = e.what();
    }
    std::lock_guard<std::mutex> inner(mu_);
    jobs_[id] = std::move(done);
  });
  return {202, {{"schema_version", kSchemaVersion}, {"id", id}, {"status", "running"}}};
}

HttpReply Service::eval_status(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return error(404, "unknown eval job: " + id);
  json j{{"schema_version", kSchemaVersion}, {"id", id}, {"status", it->second.status}};
  if (it->second.status == "done") j["report"] = it->second.report;
  if (it->second.status == "failed") j["error"] = it->second.error;
  return {200, j};
}

void Service::bind(httplib::Server& server) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server.Post("/answer", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, answer(req.body));
  });
  server.Get("/tables", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, tables());
  });
  server.Get(R"(/tables/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, table(req.matches[1]));
  });
  server.Post("/eval", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, start_eval(req.body));
  });
  server.Get(R"(/eval/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, eval_status(req.matches[1]));
  });
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
}

}  // namespace tabqa
