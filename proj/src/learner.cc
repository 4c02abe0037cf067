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

#include "mt/learner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mt/error.h"
#include "mt/random.h"

namespace mt {

Vocabulary::Vocabulary() : tokens_{""} {}

int Vocabulary::Lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kSink : it->second;
}

int Vocabulary::Intern(std::string_view token) {
  int index = Lookup(token);
  if (index != kSink || frozen_ || token.empty()) return index;
  index = size();
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), index);
  return index;
}

void Hyperparams::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    Fail(ErrorCode::kInvalidArgument, "learning_rate must be finite and > 0");
  }
  if (epochs < 1) Fail(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  if (!(l2 >= 0.0)) Fail(ErrorCode::kInvalidArgument, "l2 must be >= 0");
  if (replay_batch < 0) {
    Fail(ErrorCode::kInvalidArgument, "replay_batch must be >= 0");
  }
}

int LabelDistribution::Argmax() const {
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                          probs.begin());
}

LinearModel::LinearModel(IntentInventory inventory, Hyperparams hp,
                         uint64_t seed)
    : inventory_(std::move(inventory)),
      bias_(inventory_.size(), 0.0),
      hp_(hp),
      seed_(seed) {
  SyncWeightRows();
}

void LinearModel::SyncWeightRows() {
  weights_.resize(static_cast<size_t>(vocabulary_.size()) * num_intents(), 0.0);
}

namespace {

FeatureVector CountFeatures(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  FeatureVector x;
  for (int index : indices) {
    if (!x.empty() && x.back().first == index) {
      x.back().second += 1.0;
    } else {
      x.emplace_back(index, 1.0);
    }
  }
  return x;
}

}  // namespace

FeatureVector LinearModel::Features(const Sentence& s) const {
  std::vector<int> indices;
  indices.reserve(s.size());
  for (const std::string& token : s.tokens) {
    indices.push_back(vocabulary_.Lookup(token));
  }
  return CountFeatures(std::move(indices));
}

FeatureVector LinearModel::InternFeatures(const Sentence& s) {
  std::vector<int> indices;
  indices.reserve(s.size());
  for (const std::string& token : s.tokens) {
    indices.push_back(vocabulary_.Intern(token));
  }
  SyncWeightRows();
  return CountFeatures(std::move(indices));
}

std::vector<double> LinearModel::Logits(const FeatureVector& x) const {
  std::vector<double> logits = bias_;
  const int k = num_intents();
  for (const auto& [feature, count] : x) {
    if (feature == Vocabulary::kSink) continue;
    const double* row = &weights_[static_cast<size_t>(feature) * k];
    for (int c = 0; c < k; ++c) logits[c] += count * row[c];
  }
  return logits;
}

bool LinearModel::operator==(const LinearModel& other) const {
  return inventory_ == other.inventory_ &&
         vocabulary_.tokens() == other.vocabulary_.tokens() &&
         vocabulary_.frozen() == other.vocabulary_.frozen() &&
         weights_ == other.weights_ && bias_ == other.bias_ &&
         hp_ == other.hp_ && seed_ == other.seed_ &&
         training_set_ == other.training_set_;
}

LabelDistribution Softmax(std::span<const double> logits) {
  LabelDistribution dist;
  dist.probs.resize(logits.size());
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    dist.probs[i] = std::exp(logits[i] - max_logit);
    total += dist.probs[i];
  }
  constexpr double kFloor = std::numeric_limits<double>::min();
  for (double& p : dist.probs) p = std::max(p / total, kFloor);
  return dist;
}

LabelDistribution PredictFeatures(const LinearModel& model,
                                  const FeatureVector& x) {
  return Softmax(model.Logits(x));
}

LabelDistribution Predict(const LinearModel& model, const Sentence& s) {
  return PredictFeatures(model, model.Features(s));
}

std::vector<ScoredIntent> TopK(const IntentInventory& inventory,
                               const LabelDistribution& dist, int k) {
  if (k < 1 || k > static_cast<int>(dist.size())) {
    Fail(ErrorCode::kOutOfRange, "top-k requires 1 <= k <= " +
                                     std::to_string(dist.size()) + ", got " +
                                     std::to_string(k));
  }
  std::vector<int> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dist.probs[a] > dist.probs[b];
  });
  std::vector<ScoredIntent> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    out.push_back({inventory.label(order[i]), dist.probs[order[i]]});
  }
  return out;
}

std::vector<ScoredIntent> TopK(const LinearModel& model, const Sentence& s,
                               int k) {
  return TopK(model.inventory(), Predict(model, s), k);
}

double ExampleLoss(const LinearModel& model, const FeatureVector& x,
                   int label) {
  const std::vector<double> logits = model.Logits(x);
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double z : logits) total += std::exp(z - max_logit);
  double loss = max_logit + std::log(total) - logits[label];
  double penalty = 0.0;
  for (const auto& [feature, count] : x) {
    if (feature == Vocabulary::kSink) continue;
    for (int c = 0; c < model.num_intents(); ++c) {
      penalty += model.weight(feature, c) * model.weight(feature, c);
    }
  }
  return loss + 0.5 * model.hyperparams().l2 * penalty;
}

ExampleGradient LossGradient(const LinearModel& model, const FeatureVector& x,
                             int label) {
  const int k = model.num_intents();
  const LabelDistribution dist = PredictFeatures(model, x);
  ExampleGradient grad;
  grad.bias_grad.resize(k);
  for (int c = 0; c < k; ++c) {
    grad.bias_grad[c] = dist.probs[c] - (c == label ? 1.0 : 0.0);
  }
  grad.weight_grad.assign(x.size() * k, 0.0);
  const double l2 = model.hyperparams().l2;
  for (size_t i = 0; i < x.size(); ++i) {
    const auto [feature, count] = x[i];
    if (feature == Vocabulary::kSink) continue;
    for (int c = 0; c < k; ++c) {
      grad.weight_grad[i * k + c] =
          grad.bias_grad[c] * count + l2 * model.weight(feature, c);
    }
  }
  return grad;
}

void SgdStep(LinearModel& model, const FeatureVector& x, int label) {
  const ExampleGradient grad = LossGradient(model, x, label);
  const double lr = model.hyperparams().learning_rate;
  const int k = model.num_intents();
  for (int c = 0; c < k; ++c) model.mutable_bias()[c] -= lr * grad.bias_grad[c];
  for (size_t i = 0; i < x.size(); ++i) {
    const int feature = x[i].first;
    if (feature == Vocabulary::kSink) continue;
    for (int c = 0; c < k; ++c) {
      model.mutable_weight(feature, c) -= lr * grad.weight_grad[i * k + c];
    }
  }
}

namespace {

struct Featurized {
  FeatureVector x;
  int label;
};

void RunEpochs(LinearModel& model, std::vector<Featurized>& batch,
               uint64_t seed) {
  std::vector<size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < model.hyperparams().epochs; ++epoch) {
    Rng rng = MakeRng(seed, {0xe90c11ULL, static_cast<uint64_t>(epoch)});
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t i : order) SgdStep(model, batch[i].x, batch[i].label);
  }
}

void CheckLabel(const LinearModel& model, const LabeledExample& example) {
  if (example.label < 0 || example.label >= model.num_intents()) {
    Fail(ErrorCode::kInvalidArgument,
         "example " + example.id + " has a label outside the inventory");
  }
}

}  // namespace

LinearModel Train(std::span<const LabeledExample> examples,
                  const IntentInventory& inventory, const Hyperparams& hp,
                  uint64_t seed) {
  if (examples.empty()) {
    Fail(ErrorCode::kInvalidArgument, "cannot train on an empty set");
  }
  hp.Validate();
  LinearModel model(inventory, hp, seed);
  std::vector<Featurized> batch;
  batch.reserve(examples.size());
  for (const LabeledExample& example : examples) {
    CheckLabel(model, example);
    batch.push_back({model.InternFeatures(example.sentence), example.label});
  }
  RunEpochs(model, batch, seed);
  model.mutable_training_set().assign(examples.begin(), examples.end());
  return model;
}

void Update(LinearModel& model, const LabeledExample& taught,
            std::span<const LabeledExample> variations,
            std::span<const LabeledExample> replay_source, uint64_t seed) {
  CheckLabel(model, taught);
  for (const LabeledExample& variation : variations) {
    if (variation.label != taught.label) {
      Fail(ErrorCode::kInvalidArgument,
           "variation " + variation.id + " is labeled '" +
               model.inventory().name(variation.label) + "' but '" +
               taught.id + "' is labeled '" +
               model.inventory().name(taught.label) + "'");
    }
  }

  std::vector<Featurized> batch;
  batch.reserve(1 + variations.size() + model.hyperparams().replay_batch);
  batch.push_back({model.InternFeatures(taught.sentence), taught.label});
  for (const LabeledExample& variation : variations) {
    batch.push_back({model.InternFeatures(variation.sentence), variation.label});
  }

  const size_t want = static_cast<size_t>(model.hyperparams().replay_batch);
  if (want > 0 && !replay_source.empty()) {
    std::vector<size_t> picks(replay_source.size());
    std::iota(picks.begin(), picks.end(), 0);
    if (picks.size() > want) {
      Rng rng = MakeRng(seed, {0x4e91a7ULL});
      // Partial Fisher-Yates: the first `want` slots are a uniform sample.
      for (size_t i = 0; i < want; ++i) {
        std::swap(picks[i], picks[i + UniformIndex(rng, picks.size() - i)]);
      }
      picks.resize(want);
    }
    for (size_t i : picks) {
      batch.push_back({model.InternFeatures(replay_source[i].sentence),
                       replay_source[i].label});
    }
  }

  RunEpochs(model, batch, seed);

  auto& cumulative = model.mutable_training_set();
  cumulative.push_back(taught);
  cumulative.insert(cumulative.end(), variations.begin(), variations.end());
}

void Update(LinearModel& model, const LabeledExample& taught,
            std::span<const LabeledExample> variations, uint64_t seed) {
  // Replay indices are drawn before the training set grows, so the span
  // stays valid for the whole sampling step.
  const std::vector<LabeledExample>& source = model.training_set();
  Update(model, taught, variations,
         std::span<const LabeledExample>(source.data(), source.size()), seed);
}

double ErrorRate(const LinearModel& model,
                 std::span<const LabeledExample> test) {
  if (test.empty()) Fail(ErrorCode::kInvalidArgument, "empty test set");
  size_t wrong = 0;
  for (const LabeledExample& example : test) {
    if (Predict(model, example.sentence).Argmax() != example.label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

std::vector<double> RunningAverage(std::span<const double> errors) {
  std::vector<double> out;
  out.reserve(errors.size());
  double sum = 0.0;
  for (size_t i = 0; i < errors.size(); ++i) {
    sum += errors[i];
    out.push_back(sum / static_cast<double>(i + 1));
  }
  return out;
}

SweepResult Sweep(std::span<const Hyperparams> grid,
                  std::span<const LabeledExample> trainset,
                  std::span<const LabeledExample> evalset,
                  const IntentInventory& inventory, uint64_t seed) {
  if (grid.empty()) Fail(ErrorCode::kInvalidArgument, "empty sweep grid");
  SweepResult result;
  for (size_t i = 0; i < grid.size(); ++i) {
    const LinearModel model = Train(trainset, inventory, grid[i], seed);
    result.eval_errors.push_back(ErrorRate(model, evalset));
    if (result.eval_errors[i] < result.eval_errors[result.best_index]) {
      result.best_index = i;
    }
  }
  result.best = grid[result.best_index];
  return result;
}

}  // namespace mt
