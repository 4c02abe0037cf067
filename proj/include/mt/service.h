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

#ifndef MT_SERVICE_H_
#define MT_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "mt/jsonl.h"
#include "mt/knowledge.h"
#include "mt/session.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace mt {

struct ApiResponse {
  int status = 200;
  Json body;
};

// HTTP facade over teaching sessions. Each handler is usable in-process;
// Mount() wires them to an httplib server:
//
//   POST /sessions                     create (201)
//   GET  /sessions/{id}/next           MachineStateView
//   POST /sessions/{id}/decide         {example_id, action}
//   POST /sessions/{id}/feedback       FeedbackRecord
//   GET  /sessions/{id}/report
//   GET  /sessions/{id}/curve
//   GET  /sessions/{id}/events
//   GET  /kb/recommend?word=&session=&example=&position=
//   GET  /healthz
//
// Artifact paths in the create request are resolved against the artifacts
// directory. Every session owns its model copy; sessions opened on the same
// KB directory share one validated store. Event logs are written to
// <artifacts>/sessions/<id>.events.jsonl.
class TeachingService {
 public:
  explicit TeachingService(std::filesystem::path artifacts_dir);

  ApiResponse CreateSession(const Json& request);
  ApiResponse Next(const std::string& session_id);
  ApiResponse Decide(const std::string& session_id, const Json& request);
  ApiResponse Feedback(const std::string& session_id, const Json& request);
  ApiResponse Report(const std::string& session_id);
  ApiResponse Curve(const std::string& session_id);
  ApiResponse Events(const std::string& session_id);
  ApiResponse Recommend(const std::map<std::string, std::string>& params);
  ApiResponse Health() const;

  void Mount(httplib::Server& server);

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<Session> session;
    Json config;
    int64_t created_at = 0;
  };

  std::shared_ptr<Entry> Find(const std::string& session_id);
  std::shared_ptr<KnowledgeBase> OpenKb(const std::filesystem::path& dir,
                                        const LinearModel& model);
  std::filesystem::path Resolve(const std::string& ref) const;

  std::filesystem::path artifacts_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::map<std::string, std::shared_ptr<KnowledgeBase>> kbs_;
  uint64_t next_id_ = 1;
  uint64_t id_salt_ = 0;
};

// Maps an mt::Error to an HTTP status code.
int HttpStatusFor(const class Error& error);

}  // namespace mt

#endif  // MT_SERVICE_H_
