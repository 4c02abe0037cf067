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

#include "mt/session.h"

#include <algorithm>
#include <chrono>

#include "mt/error.h"
#include "mt/random.h"

namespace mt {
namespace {

int64_t WallMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Session::Session(SessionConfig config, LinearModel model,
                 std::vector<LabeledExample> pool,
                 std::vector<LabeledExample> test,
                 std::shared_ptr<KnowledgeBase> kb)
    : config_(std::move(config)),
      model_(std::move(model)),
      pool_(std::move(pool)),
      test_(std::move(test)),
      kb_(std::move(kb)) {
  config_.time.Validate();
  if (test_.empty()) Fail(ErrorCode::kInvalidArgument, "session needs a test set");
  if (config_.top_k < 1) {
    Fail(ErrorCode::kOutOfRange, "session top_k must be >= 1");
  }
  if (!kb_) {
    kb_ = std::make_shared<KnowledgeBase>(nullptr, nullptr, nullptr);
  }
}

std::optional<std::string> Session::offered_id() const {
  if (phase_ != Phase::kOffered) return std::nullopt;
  return current_id_;
}

std::optional<std::string> Session::pending_feedback_id() const {
  if (phase_ != Phase::kAccepted) return std::nullopt;
  return current_id_;
}

size_t Session::PoolIndex(const std::string& example_id) const {
  for (size_t i = 0; i < pool_.size(); ++i) {
    if (pool_[i].id == example_id) return i;
  }
  Fail(ErrorCode::kNotFound, "example not in pool: " + example_id);
}

const LabeledExample& Session::PoolExample(const std::string& example_id) const {
  return pool_[PoolIndex(example_id)];
}

std::vector<size_t> Session::EligibleIndices() const {
  std::vector<size_t> eligible;
  for (size_t i = 0; i < pool_.size(); ++i) {
    auto it = cooldown_until_.find(pool_[i].id);
    if (it == cooldown_until_.end() || offer_count_ >= it->second) {
      eligible.push_back(i);
    }
  }
  // Everything cooling down: offer from the whole pool rather than stall.
  if (eligible.empty()) {
    for (size_t i = 0; i < pool_.size(); ++i) eligible.push_back(i);
  }
  return eligible;
}

MachineStateView Session::BuildView(const LabeledExample& example) const {
  const LabelDistribution dist = Predict(model_, example.sentence);
  MachineStateView view;
  view.example_id = example.id;
  view.sentence = example.sentence;
  view.top_k = TopK(model_.inventory(), dist, std::min(config_.top_k, model_.num_intents()));
  view.confusion = ConfusionScore(dist, config_.confusion);
  if (config_.explain) {
    view.importance =
        WordImportance(model_, example.sentence, config_.kl_direction);
    for (int p = 0; p < static_cast<int>(example.sentence.size()); ++p) {
      view.recommendations.push_back(
          kb_->Recommend(example.sentence.tokens[p], example.sentence, p));
    }
  }
  return view;
}

void Session::Log(EventKind kind, const std::string& example_id, Json payload) {
  events_.push_back({kind, example_id, clock_, WallMillis(), std::move(payload)});
  if (sink_) sink_(events_.back());
}

MachineStateView Session::NextCandidate() {
  if (phase_ == Phase::kOffered) return *current_view_;
  if (phase_ == Phase::kAccepted) {
    Fail(ErrorCode::kConflict,
         "feedback pending for " + current_id_ + " (last event: accepted)");
  }
  if (pool_.empty()) Fail(ErrorCode::kExhausted, "pool exhausted");

  const std::vector<size_t> eligible = EligibleIndices();
  size_t chosen = eligible.front();
  if (config_.selection == SelectionPolicy::kRandom) {
    Rng rng = MakeRng(config_.seed,
                      {0x0ffe7ULL, static_cast<uint64_t>(offer_count_)});
    chosen = eligible[UniformIndex(rng, eligible.size())];
  } else {
    chosen = MostConfusing(model_, pool_, eligible, config_.confusion);
  }

  current_view_ = BuildView(pool_[chosen]);
  current_id_ = pool_[chosen].id;
  phase_ = Phase::kOffered;
  ++offer_count_;
  Log(EventKind::kOffered, current_id_,
      {{"confusion", current_view_->confusion},
       {"top1", current_view_->top_k.front().intent.name}});
  return *current_view_;
}

void Session::Decide(const std::string& example_id, FeedbackAction action) {
  if (phase_ != Phase::kOffered) {
    Fail(ErrorCode::kConflict,
         std::string("no offer awaiting a decision (last event: ") +
             (events_.empty() ? "none"
                              : std::string(EventKindName(events_.back().kind))) +
             ")");
  }
  if (example_id != current_id_) {
    Fail(ErrorCode::kConflict,
         "decision for " + example_id + " but " + current_id_ + " is offered");
  }
  current_view_.reset();
  if (action == FeedbackAction::kSkip) {
    const size_t index = PoolIndex(example_id);
    LabeledExample example = std::move(pool_[index]);
    pool_.erase(pool_.begin() + index);
    pool_.push_back(std::move(example));
    cooldown_until_[example_id] = offer_count_ + config_.skip_cooldown;
    clock_ += config_.time.skip_seconds;
    ++skipped_;
    phase_ = Phase::kIdle;
    Log(EventKind::kSkipped, example_id, Json::object());
  } else {
    clock_ += config_.time.label_seconds;
    phase_ = Phase::kAccepted;
    Log(EventKind::kAccepted, example_id, Json::object());
  }
}

TeachStepResult Session::SubmitFeedback(const FeedbackRecord& fb) {
  if (phase_ != Phase::kAccepted) {
    Fail(ErrorCode::kConflict,
         std::string("no accepted example awaiting feedback (last event: ") +
             (events_.empty() ? "none"
                              : std::string(EventKindName(events_.back().kind))) +
             ")");
  }
  if (fb.example_id != current_id_) {
    Fail(ErrorCode::kConflict, "feedback for " + fb.example_id + " but " +
                                   current_id_ + " is pending");
  }
  if (fb.action != FeedbackAction::kAccept) {
    Fail(ErrorCode::kInvalidArgument, "feedback for an accepted example must "
                                      "have action 'accept'");
  }
  const size_t index = PoolIndex(fb.example_id);
  fb.Validate(pool_[index].sentence.size(), model_.num_intents());

  LabeledExample taught = pool_[index];
  taught.label = fb.label;
  const uint64_t step_seed =
      MixSeed(config_.seed, {0x7eac4ULL, static_cast<uint64_t>(accepted_)});

  std::vector<Variation> variations =
      GenerateVariations(taught, fb, kb_->masked_lm(), config_.variation);
  if (config_.augment == AugmentMode::kEdaMatched) {
    variations = EdaAugment(taught, static_cast<int>(variations.size()),
                            kb_->lexicon(), step_seed);
  }
  const std::vector<LabeledExample> augmented = VariationsToExamples(variations);

  TeachStepResult result;
  if (config_.record_validated) {
    for (const auto& [position, phrases] : fb.validated) {
      if (phrases.empty()) continue;
      try {
        kb_->RecordValidated(taught.sentence.tokens[position], phrases);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kIo) throw;
        result.persistence_error = e.what();
      }
    }
  }

  Update(model_, taught, augmented, step_seed);
  pool_.erase(pool_.begin() + index);
  if (fb.HasAnnotations()) clock_ += config_.time.FeedbackExtraSeconds();
  ++accepted_;
  variations_ += augmented.size();
  result.variation_count = augmented.size();
  result.error = ErrorRate(model_, test_);
  curve_.Append(clock_, result.error);
  result.point = curve_.back();
  phase_ = Phase::kIdle;
  current_id_.clear();
  Log(EventKind::kFeedbackApplied, fb.example_id,
      {{"feedback", FeedbackToJson(fb, model_.inventory())},
       {"variation_count", result.variation_count},
       {"error", result.error}});
  return result;
}

SessionReport Session::Report() const {
  SessionReport report;
  report.offered = offer_count_;
  report.accepted = accepted_;
  report.skipped = skipped_;
  if (accepted_ > 0) {
    report.skip_ratio = static_cast<double>(skipped_) / accepted_;
  }
  report.total_sim_seconds = clock_;
  report.variations = variations_;
  if (!curve_.empty()) {
    report.final_error = curve_.back().error;
    report.running_average_error = curve_.back().running_avg;
  }
  return report;
}

std::vector<ReplacementRecommendation> Session::Recommend(
    const std::string& example_id, int position) const {
  const LabeledExample& example = PoolExample(example_id);
  if (position < 0 || position >= static_cast<int>(example.sentence.size())) {
    Fail(ErrorCode::kOutOfRange, "token position out of range");
  }
  return kb_->Recommend(example.sentence.tokens[position], example.sentence,
                        position);
}

void ReplayEvents(Session& session, std::span<const InteractionEvent> events) {
  for (const InteractionEvent& event : events) {
    switch (event.kind) {
      case EventKind::kOffered: {
        const MachineStateView view = session.NextCandidate();
        if (view.example_id != event.example_id) {
          Fail(ErrorCode::kConflict, "replay diverged: log offers " +
                                         event.example_id + ", session offers " +
                                         view.example_id);
        }
        break;
      }
      case EventKind::kSkipped:
        session.Decide(event.example_id, FeedbackAction::kSkip);
        break;
      case EventKind::kAccepted:
        session.Decide(event.example_id, FeedbackAction::kAccept);
        break;
      case EventKind::kFeedbackApplied:
        session.SubmitFeedback(FeedbackFromJson(event.payload.at("feedback"),
                                                session.model().inventory()));
        break;
    }
  }
}

}  // namespace mt
