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

// JSON forms of the session types.

#include <cmath>

#include "mt/error.h"
#include "mt/session.h"

namespace mt {

void TimeModel::Validate() const {
  if (!(label_seconds > 0.0) || !(feedback_multiplier > 0.0) ||
      !(skip_seconds > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "time model values must be positive");
  }
}

Json TimeModelToJson(const TimeModel& time) {
  return {{"label_seconds", time.label_seconds},
          {"feedback_multiplier", time.feedback_multiplier},
          {"skip_seconds", time.skip_seconds}};
}

TimeModel TimeModelFromJson(const Json& record) {
  TimeModel time;
  try {
    time.label_seconds = record.value("label_seconds", time.label_seconds);
    time.feedback_multiplier =
        record.value("feedback_multiplier", time.feedback_multiplier);
    time.skip_seconds = record.value("skip_seconds", time.skip_seconds);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad time model: ") + e.what());
  }
  time.Validate();
  return time;
}

void ErrorCurve::Append(double sim_seconds, double error) {
  error_sum_ += error;
  const int n = static_cast<int>(points_.size()) + 1;
  points_.push_back({n, sim_seconds, error, error_sum_ / n});
}

ErrorCurve ErrorCurve::FromPoints(std::vector<CurvePoint> points) {
  ErrorCurve curve;
  for (const CurvePoint& p : points) curve.error_sum_ += p.error;
  curve.points_ = std::move(points);
  return curve;
}

Json CurvePointToJson(const CurvePoint& point) {
  return {{"n_examples", point.n_examples},
          {"sim_seconds", point.sim_seconds},
          {"error", point.error},
          {"running_avg", point.running_avg}};
}

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kOffered:
      return "offered";
    case EventKind::kSkipped:
      return "skipped";
    case EventKind::kAccepted:
      return "accepted";
    case EventKind::kFeedbackApplied:
      return "feedback_applied";
  }
  return "offered";
}

EventKind ParseEventKind(std::string_view name) {
  if (name == "offered") return EventKind::kOffered;
  if (name == "skipped") return EventKind::kSkipped;
  if (name == "accepted") return EventKind::kAccepted;
  if (name == "feedback_applied") return EventKind::kFeedbackApplied;
  Fail(ErrorCode::kInvalidArgument, "unknown event kind: " + std::string(name));
}

Json EventToJson(const InteractionEvent& event) {
  return {{"kind", std::string(EventKindName(event.kind))},
          {"example_id", event.example_id},
          {"sim_seconds", event.sim_seconds},
          {"wall_ms", event.wall_ms},
          {"payload", event.payload}};
}

InteractionEvent EventFromJson(const Json& record) {
  InteractionEvent event;
  try {
    event.kind = ParseEventKind(record.at("kind").get<std::string>());
    event.example_id = record.at("example_id").get<std::string>();
    event.sim_seconds = record.value("sim_seconds", 0.0);
    event.wall_ms = record.value("wall_ms", int64_t{0});
    event.payload = record.value("payload", Json::object());
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad event: ") + e.what());
  }
  return event;
}

std::vector<InteractionEvent> LoadEventLog(const std::filesystem::path& path) {
  std::vector<InteractionEvent> events;
  for (const Json& record : ReadJsonl(path)) {
    events.push_back(EventFromJson(record));
  }
  return events;
}

Json MachineStateViewToJson(const MachineStateView& view) {
  Json predictions = Json::array();
  for (const ScoredIntent& s : view.top_k) {
    predictions.push_back({{"intent", s.intent.name},
                           {"id", s.intent.id},
                           {"confidence", s.confidence}});
  }
  Json recommendations = Json::array();
  for (const auto& per_token : view.recommendations) {
    Json list = Json::array();
    for (const ReplacementRecommendation& r : per_token) {
      list.push_back({{"phrase", r.phrase},
                      {"source", std::string(SourceName(r.source))}});
    }
    recommendations.push_back(std::move(list));
  }
  return {{"example_id", view.example_id},
          {"text", view.sentence.raw},
          {"tokens", view.sentence.tokens},
          {"top_k", std::move(predictions)},
          {"confusion", view.confusion},
          {"importance", view.importance.scores},
          {"recommendations", std::move(recommendations)}};
}

Json ReportToJson(const SessionReport& report) {
  auto optional = [](const std::optional<double>& v) -> Json {
    return v ? Json(*v) : Json(nullptr);
  };
  return {{"offered", report.offered},
          {"accepted", report.accepted},
          {"skipped", report.skipped},
          {"skip_ratio", optional(report.skip_ratio)},
          {"total_sim_seconds", report.total_sim_seconds},
          {"variations", report.variations},
          {"final_error", optional(report.final_error)},
          {"running_average_error", optional(report.running_average_error)}};
}

}  // namespace mt
