//
// Copyright 2026 The mtbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "mt/service.h"

#include <chrono>
#include <cstdio>
#include <random>

#include "httplib.h"
#include "mt/checkpoint.h"
#include "mt/error.h"
#include "mt/random.h"

namespace mt {
namespace {

Json ErrorBody(const std::string& message) { return {{"error", message}}; }

ApiResponse FromError(const Error& e) {
  return {HttpStatusFor(e), ErrorBody(e.what())};
}

// Runs `body`, converting library and JSON errors to API responses.
template <typename F>
ApiResponse Guard(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return FromError(e);
  } catch (const Json::exception& e) {
    return {400, ErrorBody(std::string("malformed request: ") + e.what())};
  }
}

FeedbackAction ParseAction(const std::string& action) {
  if (action == "accept") return FeedbackAction::kAccept;
  if (action == "skip") return FeedbackAction::kSkip;
  Fail(ErrorCode::kInvalidArgument, "action must be 'accept' or 'skip'");
}

std::string LastEventName(const Session& session) {
  return session.events().empty()
             ? "none"
             : std::string(EventKindName(session.events().back().kind));
}

}  // namespace

int HttpStatusFor(const Error& error) {
  switch (error.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOutOfRange:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kExhausted:
      return 410;
    case ErrorCode::kUnavailable:
      return 503;
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

TeachingService::TeachingService(std::filesystem::path artifacts_dir)
    : artifacts_(std::move(artifacts_dir)),
      id_salt_(std::random_device{}()) {}

std::filesystem::path TeachingService::Resolve(const std::string& ref) const {
  std::filesystem::path path(ref);
  return path.is_absolute() ? path : artifacts_ / path;
}

std::shared_ptr<TeachingService::Entry> TeachingService::Find(
    const std::string& session_id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    Fail(ErrorCode::kNotFound, "unknown session: " + session_id);
  }
  return it->second;
}

std::shared_ptr<KnowledgeBase> TeachingService::OpenKb(
    const std::filesystem::path& dir, const LinearModel& model) {
  std::lock_guard lock(mutex_);
  const std::string key = std::filesystem::weakly_canonical(dir).string();
  if (auto it = kbs_.find(key); it != kbs_.end()) return it->second;
  std::vector<Sentence> corpus;
  if (std::filesystem::exists(dir / "corpus.jsonl")) {
    for (const LabeledExample& e :
         LoadDataset(dir / "corpus.jsonl", model.inventory())) {
      corpus.push_back(e.sentence);
    }
  } else {
    for (const LabeledExample& e : model.training_set()) {
      if (e.origin != Origin::kAugmented) corpus.push_back(e.sentence);
    }
  }
  auto kb = std::make_shared<KnowledgeBase>(KnowledgeBase::Open(dir, corpus));
  kbs_[key] = kb;
  return kb;
}

ApiResponse TeachingService::CreateSession(const Json& request) {
  return Guard([&]() -> ApiResponse {
    if (!request.is_object()) {
      Fail(ErrorCode::kInvalidArgument, "session config must be an object");
    }
    for (const char* field : {"model", "pool", "test", "kb"}) {
      if (!request.contains(field) || !request[field].is_string()) {
        Fail(ErrorCode::kInvalidArgument,
             std::string("missing string field '") + field + "'");
      }
    }
    const auto model_path = Resolve(request["model"].get<std::string>());
    const auto pool_path = Resolve(request["pool"].get<std::string>());
    const auto test_path = Resolve(request["test"].get<std::string>());
    const auto kb_path = Resolve(request["kb"].get<std::string>());
    for (const auto& path : {model_path, pool_path, test_path, kb_path}) {
      if (!std::filesystem::exists(path)) {
        Fail(ErrorCode::kNotFound, "missing artifact: " + path.string());
      }
    }

    SessionConfig config;
    if (request.contains("time_model")) {
      config.time = TimeModelFromJson(request["time_model"]);
    }
    config.seed = request.value("seed", uint64_t{0});
    config.skip_cooldown = request.value("skip_cooldown", config.skip_cooldown);

    LinearModel model = LoadModel(model_path);
    auto pool = LoadDataset(pool_path, model.inventory());
    auto test = LoadDataset(test_path, model.inventory());
    auto kb = OpenKb(kb_path, model);

    auto entry = std::make_shared<Entry>();
    entry->created_at = std::chrono::duration_cast<std::chrono::seconds>(
                            std::chrono::system_clock::now().time_since_epoch())
                            .count();
    {
      std::lock_guard lock(mutex_);
      char id[48];
      std::snprintf(id, sizeof(id), "s%04llu-%08llx",
                    static_cast<unsigned long long>(next_id_),
                    static_cast<unsigned long long>(
                        MixSeed(id_salt_, {next_id_}) & 0xffffffffULL));
      ++next_id_;
      config.session_id = id;
    }
    entry->config = request;
    entry->config["seed"] = config.seed;
    entry->config["time_model"] = TimeModelToJson(config.time);
    entry->session = std::make_unique<Session>(config, std::move(model),
                                               std::move(pool), std::move(test),
                                               std::move(kb));
    const auto log_path =
        artifacts_ / "sessions" / (config.session_id + ".events.jsonl");
    std::filesystem::create_directories(log_path.parent_path());
    entry->session->set_event_sink([log_path](const InteractionEvent& event) {
      AppendJsonl(log_path, EventToJson(event));
    });
    {
      std::lock_guard lock(mutex_);
      sessions_[config.session_id] = entry;
    }
    return {201,
            {{"session_id", config.session_id},
             {"created_at", entry->created_at},
             {"config", entry->config}}};
  });
}

ApiResponse TeachingService::Next(const std::string& session_id) {
  return Guard([&]() -> ApiResponse {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mutex);
    try {
      return {200, MachineStateViewToJson(entry->session->NextCandidate())};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConflict) throw;
      return {409, {{"error", e.what()},
                    {"event", LastEventName(*entry->session)}}};
    }
  });
}

ApiResponse TeachingService::Decide(const std::string& session_id,
                                    const Json& request) {
  return Guard([&]() -> ApiResponse {
    auto entry = Find(session_id);
    const std::string example_id = request.at("example_id").get<std::string>();
    const FeedbackAction action =
        ParseAction(request.at("action").get<std::string>());
    std::lock_guard lock(entry->mutex);
    try {
      entry->session->Decide(example_id, action);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConflict) throw;
      return {409, {{"error", e.what()},
                    {"event", LastEventName(*entry->session)}}};
    }
    return {200,
            {{"example_id", example_id},
             {"action", request["action"]},
             {"sim_seconds", entry->session->clock()}}};
  });
}

ApiResponse TeachingService::Feedback(const std::string& session_id,
                                      const Json& request) {
  return Guard([&]() -> ApiResponse {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mutex);
    Session& session = *entry->session;
    const FeedbackRecord fb =
        FeedbackFromJson(request, session.model().inventory());
    try {
      const TeachStepResult result = session.SubmitFeedback(fb);
      Json body = {{"example_id", fb.example_id},
                   {"variation_count", result.variation_count},
                   {"error", result.error},
                   {"point", CurvePointToJson(result.point)}};
      if (result.persistence_error) {
        body["persistence_error"] = *result.persistence_error;
      }
      return {200, body};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kConflict) throw;
      return {409, {{"error", e.what()}, {"event", LastEventName(session)}}};
    }
  });
}

ApiResponse TeachingService::Report(const std::string& session_id) {
  return Guard([&]() -> ApiResponse {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mutex);
    return {200, ReportToJson(entry->session->Report())};
  });
}

ApiResponse TeachingService::Curve(const std::string& session_id) {
  return Guard([&]() -> ApiResponse {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mutex);
    Json points = Json::array();
    for (const CurvePoint& p : entry->session->curve().points()) {
      points.push_back(CurvePointToJson(p));
    }
    return {200, {{"points", std::move(points)}}};
  });
}

ApiResponse TeachingService::Events(const std::string& session_id) {
  return Guard([&]() -> ApiResponse {
    auto entry = Find(session_id);
    std::lock_guard lock(entry->mutex);
    Json events = Json::array();
    for (const InteractionEvent& e : entry->session->events()) {
      events.push_back(EventToJson(e));
    }
    return {200, {{"events", std::move(events)}}};
  });
}

ApiResponse TeachingService::Recommend(
    const std::map<std::string, std::string>& params) {
  return Guard([&]() -> ApiResponse {
    for (const char* key : {"word", "session", "example", "position"}) {
      if (!params.count(key)) {
        Fail(ErrorCode::kInvalidArgument,
             std::string("missing query parameter '") + key + "'");
      }
    }
    int position = 0;
    try {
      size_t used = 0;
      position = std::stoi(params.at("position"), &used);
      if (used != params.at("position").size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      Fail(ErrorCode::kInvalidArgument, "position must be an integer");
    }
    auto entry = Find(params.at("session"));
    std::lock_guard lock(entry->mutex);
    const LabeledExample& example =
        entry->session->PoolExample(params.at("example"));
    if (position < 0 || position >= static_cast<int>(example.sentence.size()) ||
        example.sentence.tokens[position] != params.at("word")) {
      Fail(ErrorCode::kInvalidArgument,
           "word does not match the token at that position");
    }
    Json list = Json::array();
    for (const ReplacementRecommendation& r :
         entry->session->Recommend(example.id, position)) {
      list.push_back({{"phrase", r.phrase},
                      {"source", std::string(SourceName(r.source))}});
    }
    return {200, {{"word", params.at("word")}, {"recommendations", list}}};
  });
}

ApiResponse TeachingService::Health() const {
  return {200, {{"status", "ok"}}};
}

void TeachingService::Mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req) -> Json {
    return Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  };
  auto bad_json = ApiResponse{400, ErrorBody("request body is not valid JSON")};

  server.Get("/healthz", [=, this](const httplib::Request&, httplib::Response& res) {
    send(res, Health());
  });
  server.Post("/sessions", [=, this](const httplib::Request& req,
                                     httplib::Response& res) {
    const Json body = parse(req);
    send(res, body.is_discarded() ? bad_json : CreateSession(body));
  });
  server.Get(R"(/sessions/([^/]+)/next)",
             [=, this](const httplib::Request& req, httplib::Response& res) {
               send(res, Next(req.matches[1]));
             });
  server.Post(R"(/sessions/([^/]+)/decide)",
              [=, this](const httplib::Request& req, httplib::Response& res) {
                const Json body = parse(req);
                send(res, body.is_discarded() ? bad_json
                                              : Decide(req.matches[1], body));
              });
  server.Post(R"(/sessions/([^/]+)/feedback)",
              [=, this](const httplib::Request& req, httplib::Response& res) {
                const Json body = parse(req);
                send(res, body.is_discarded() ? bad_json
                                              : Feedback(req.matches[1], body));
              });
  server.Get(R"(/sessions/([^/]+)/report)",
             [=, this](const httplib::Request& req, httplib::Response& res) {
               send(res, Report(req.matches[1]));
             });
  server.Get(R"(/sessions/([^/]+)/curve)",
             [=, this](const httplib::Request& req, httplib::Response& res) {
               send(res, Curve(req.matches[1]));
             });
  server.Get(R"(/sessions/([^/]+)/events)",
             [=, this](const httplib::Request& req, httplib::Response& res) {
               send(res, Events(req.matches[1]));
             });
  server.Get("/kb/recommend",
             [=, this](const httplib::Request& req, httplib::Response& res) {
               std::map<std::string, std::string> params;
               for (const auto& [key, value] : req.params) params[key] = value;
               send(res, Recommend(params));
             });
}

}  // namespace mt
