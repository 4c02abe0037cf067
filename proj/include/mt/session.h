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

#ifndef MT_SESSION_H_
#define MT_SESSION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mt/augment.h"
#include "mt/corpus.h"
#include "mt/interpret.h"
#include "mt/jsonl.h"
#include "mt/knowledge.h"
#include "mt/learner.h"
#include "mt/selector.h"

namespace mt {

// Simulated teaching time. Feedback beyond the label costs
// label_seconds * (feedback_multiplier - 1) on top of the accept charge.
struct TimeModel {
  double label_seconds = 10.0;
  double feedback_multiplier = 8.0;
  double skip_seconds = 1.0;

  static TimeModel TeacherOne() { return {10.0, 8.0, 1.0}; }
  static TimeModel TeacherTwo() { return {10.0, 4.0, 1.0}; }

  double FeedbackExtraSeconds() const {
    return label_seconds * (feedback_multiplier - 1.0);
  }
  void Validate() const;
};

Json TimeModelToJson(const TimeModel& time);
TimeModel TimeModelFromJson(const Json& record);

struct CurvePoint {
  int n_examples = 0;
  double sim_seconds = 0.0;
  double error = 0.0;
  double running_avg = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

// Test error after every accepted example.
class ErrorCurve {
 public:
  void Append(double sim_seconds, double error);

  const std::vector<CurvePoint>& points() const { return points_; }
  size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const CurvePoint& back() const { return points_.back(); }

  // Restores a curve from stored points; running averages are trusted.
  static ErrorCurve FromPoints(std::vector<CurvePoint> points);

  bool operator==(const ErrorCurve&) const = default;

 private:
  std::vector<CurvePoint> points_;
  double error_sum_ = 0.0;
};

Json CurvePointToJson(const CurvePoint& point);

enum class EventKind { kOffered, kSkipped, kAccepted, kFeedbackApplied };

std::string_view EventKindName(EventKind kind);
EventKind ParseEventKind(std::string_view name);

struct InteractionEvent {
  EventKind kind = EventKind::kOffered;
  std::string example_id;
  double sim_seconds = 0.0;  // session clock after the event
  int64_t wall_ms = 0;
  Json payload = Json::object();
};

Json EventToJson(const InteractionEvent& event);
InteractionEvent EventFromJson(const Json& record);
std::vector<InteractionEvent> LoadEventLog(const std::filesystem::path& path);

enum class SelectionPolicy { kConfusion, kRandom };
enum class AugmentMode { kFeedback, kEdaMatched };

struct SessionConfig {
  std::string session_id = "session";
  TimeModel time;
  ConfusionOptions confusion;
  int top_k = kDefaultTopK;
  int skip_cooldown = 25;
  uint64_t seed = 0;
  SelectionPolicy selection = SelectionPolicy::kConfusion;
  AugmentMode augment = AugmentMode::kFeedback;
  VariationOptions variation;
  bool record_validated = true;
  // Attach importance and replacement recommendations to each offer.
  bool explain = true;
  KlDirection kl_direction = KlDirection::kDeletedFromOriginal;
};

struct MachineStateView {
  std::string example_id;
  Sentence sentence;
  std::vector<ScoredIntent> top_k;
  double confusion = 0.0;
  ImportanceProfile importance;
  // One list per token position.
  std::vector<std::vector<ReplacementRecommendation>> recommendations;
};

Json MachineStateViewToJson(const MachineStateView& view);

struct TeachStepResult {
  size_t variation_count = 0;
  double error = 0.0;
  CurvePoint point;
  // Set when the validated store could not be persisted; the in-memory
  // store and the model update are still applied.
  std::optional<std::string> persistence_error;
};

struct SessionReport {
  int offered = 0;
  int accepted = 0;
  int skipped = 0;
  std::optional<double> skip_ratio;  // skipped / accepted
  double total_sim_seconds = 0.0;
  size_t variations = 0;
  std::optional<double> final_error;
  std::optional<double> running_average_error;
};

Json ReportToJson(const SessionReport& report);

// The teaching loop. Every example goes offered -> (skipped | accepted ->
// feedback_applied); calls out of that order throw kConflict and leave the
// session untouched.
class Session {
 public:
  Session(SessionConfig config, LinearModel model,
          std::vector<LabeledExample> pool, std::vector<LabeledExample> test,
          std::shared_ptr<KnowledgeBase> kb);

  // Called for every event right after it is appended to the log.
  void set_event_sink(std::function<void(const InteractionEvent&)> sink) {
    sink_ = std::move(sink);
  }

  // The current offer, or a fresh one when nothing is pending. Throws
  // kExhausted when the pool is empty and kConflict while feedback is due.
  MachineStateView NextCandidate();

  void Decide(const std::string& example_id, FeedbackAction action);

  TeachStepResult SubmitFeedback(const FeedbackRecord& fb);

  SessionReport Report() const;

  // Recommendations for one token of a pool example.
  std::vector<ReplacementRecommendation> Recommend(const std::string& example_id,
                                                   int position) const;

  const SessionConfig& config() const { return config_; }
  const LinearModel& model() const { return model_; }
  const KnowledgeBase& kb() const { return *kb_; }
  const ErrorCurve& curve() const { return curve_; }
  const std::vector<InteractionEvent>& events() const { return events_; }
  const std::vector<LabeledExample>& pool() const { return pool_; }
  const std::vector<LabeledExample>& test() const { return test_; }
  double clock() const { return clock_; }
  bool pool_empty() const { return pool_.empty(); }
  std::optional<std::string> offered_id() const;
  std::optional<std::string> pending_feedback_id() const;
  const LabeledExample& PoolExample(const std::string& example_id) const;

 private:
  enum class Phase { kIdle, kOffered, kAccepted };

  size_t PoolIndex(const std::string& example_id) const;
  std::vector<size_t> EligibleIndices() const;
  MachineStateView BuildView(const LabeledExample& example) const;
  void Log(EventKind kind, const std::string& example_id, Json payload);

  SessionConfig config_;
  LinearModel model_;
  std::vector<LabeledExample> pool_;
  std::vector<LabeledExample> test_;
  std::shared_ptr<KnowledgeBase> kb_;

  Phase phase_ = Phase::kIdle;
  std::string current_id_;
  std::optional<MachineStateView> current_view_;
  int offer_count_ = 0;
  std::map<std::string, int> cooldown_until_;
  double clock_ = 0.0;
  int accepted_ = 0;
  int skipped_ = 0;
  size_t variations_ = 0;
  ErrorCurve curve_;
  std::vector<InteractionEvent> events_;
  std::function<void(const InteractionEvent&)> sink_;
};

// Re-drives `session` through a recorded log. Throws kConflict when the
// session diverges from the log (a different example is offered).
void ReplayEvents(Session& session, std::span<const InteractionEvent> events);

}  // namespace mt

#endif  // MT_SESSION_H_
