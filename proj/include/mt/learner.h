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

#ifndef MT_LEARNER_H_
#define MT_LEARNER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mt/corpus.h"

namespace mt {

// Maps tokens to dense feature indices. Index 0 is the out-of-vocabulary
// sink; its weights are pinned to zero.
class Vocabulary {
 public:
  static constexpr int kSink = 0;

  Vocabulary();

  int size() const { return static_cast<int>(tokens_.size()); }
  bool frozen() const { return frozen_; }
  void set_frozen(bool frozen) { frozen_ = frozen; }

  // Index of `token`, or kSink when unknown.
  int Lookup(std::string_view token) const;
  // Index of `token`, adding it when unknown and not frozen.
  int Intern(std::string_view token);

  // Token text by index; the sink is the empty string.
  const std::string& token(int index) const { return tokens_[index]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  bool frozen_ = false;
};

// Sparse term-frequency counts, sorted by feature index.
using FeatureVector = std::vector<std::pair<int, double>>;

struct Hyperparams {
  double learning_rate = 0.1;
  int epochs = 5;
  double l2 = 1e-4;
  int replay_batch = 32;

  static Hyperparams Bootstrap() { return {0.1, 30, 1e-4, 32}; }
  static Hyperparams Online() { return {0.1, 5, 1e-4, 32}; }
  void Validate() const;
  bool operator==(const Hyperparams&) const = default;
};

struct LabelDistribution {
  std::vector<double> probs;

  int Argmax() const;
  size_t size() const { return probs.size(); }
};

// Multinomial logistic regression over bag-of-words counts. Weights are
// stored feature-major (row f holds one weight per intent) so new
// vocabulary is appended without reshaping.
class LinearModel {
 public:
  LinearModel() = default;
  LinearModel(IntentInventory inventory, Hyperparams hp, uint64_t seed);

  const IntentInventory& inventory() const { return inventory_; }
  int num_intents() const { return inventory_.size(); }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  Vocabulary& mutable_vocabulary() { return vocabulary_; }
  const Hyperparams& hyperparams() const { return hp_; }
  void set_hyperparams(const Hyperparams& hp) { hp_ = hp; }
  uint64_t seed() const { return seed_; }

  double weight(int feature, int intent) const {
    return weights_[static_cast<size_t>(feature) * num_intents() + intent];
  }
  double& mutable_weight(int feature, int intent) {
    return weights_[static_cast<size_t>(feature) * num_intents() + intent];
  }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& mutable_weights() { return weights_; }
  const std::vector<double>& bias() const { return bias_; }
  std::vector<double>& mutable_bias() { return bias_; }

  // Examples the model has been trained on so far; grows monotonically.
  const std::vector<LabeledExample>& training_set() const {
    return training_set_;
  }
  std::vector<LabeledExample>& mutable_training_set() { return training_set_; }

  // Read-only featurization: unknown tokens land on the sink.
  FeatureVector Features(const Sentence& s) const;
  // Featurization that grows the vocabulary (and weight rows) as needed.
  FeatureVector InternFeatures(const Sentence& s);

  std::vector<double> Logits(const FeatureVector& x) const;

  // Adds zero weight rows so every vocabulary entry has one.
  void SyncWeightRows();

  bool operator==(const LinearModel& other) const;

 private:
  IntentInventory inventory_;
  Vocabulary vocabulary_;
  std::vector<double> weights_;
  std::vector<double> bias_;
  Hyperparams hp_;
  uint64_t seed_ = 0;
  std::vector<LabeledExample> training_set_;
};

// Numerically stable softmax with every entry floored at the smallest
// normal double so downstream logs stay finite.
LabelDistribution Softmax(std::span<const double> logits);

LabelDistribution Predict(const LinearModel& model, const Sentence& s);
LabelDistribution PredictFeatures(const LinearModel& model,
                                  const FeatureVector& x);

struct ScoredIntent {
  IntentLabel intent;
  double confidence = 0.0;
};

inline constexpr int kDefaultTopK = 5;

// Highest-probability intents, descending; ties go to the lower id.
std::vector<ScoredIntent> TopK(const IntentInventory& inventory,
                               const LabelDistribution& dist, int k);
std::vector<ScoredIntent> TopK(const LinearModel& model, const Sentence& s,
                               int k = kDefaultTopK);

// Cross-entropy loss of one example plus 0.5 * l2 * ||W||^2 restricted to
// the example's active features.
double ExampleLoss(const LinearModel& model, const FeatureVector& x, int label);

// Analytic gradient of ExampleLoss. `weight_grad` is laid out like
// FeatureVector order: entry [i * K + c] belongs to feature x[i].first.
struct ExampleGradient {
  std::vector<double> weight_grad;
  std::vector<double> bias_grad;
};
ExampleGradient LossGradient(const LinearModel& model, const FeatureVector& x,
                             int label);

// One plain SGD step on a single example.
void SgdStep(LinearModel& model, const FeatureVector& x, int label);

// Trains a fresh model for hp.epochs passes over a seeded shuffle of
// `examples`. The vocabulary is built from the training data.
LinearModel Train(std::span<const LabeledExample> examples,
                  const IntentInventory& inventory, const Hyperparams& hp,
                  uint64_t seed);

// Online teaching update. Appends taught + variations to the model's
// training set, then runs hp.epochs SGD passes over taught, the variations
// and hp.replay_batch examples sampled from `replay_source`.
// Throws kInvalidArgument when a variation's label differs from taught's.
void Update(LinearModel& model, const LabeledExample& taught,
            std::span<const LabeledExample> variations,
            std::span<const LabeledExample> replay_source, uint64_t seed);

// Convenience overload replaying from the model's own training set as it
// was before this update.
void Update(LinearModel& model, const LabeledExample& taught,
            std::span<const LabeledExample> variations, uint64_t seed);

// Fraction of `test` misclassified by argmax. Throws on an empty set.
double ErrorRate(const LinearModel& model,
                 std::span<const LabeledExample> test);

// Prefix means.
std::vector<double> RunningAverage(std::span<const double> errors);

struct SweepResult {
  Hyperparams best;
  size_t best_index = 0;
  std::vector<double> eval_errors;  // aligned with the grid
};

// Trains one model per grid point; the lowest eval error wins, earliest
// grid point on ties.
SweepResult Sweep(std::span<const Hyperparams> grid,
                  std::span<const LabeledExample> trainset,
                  std::span<const LabeledExample> evalset,
                  const IntentInventory& inventory, uint64_t seed);

}  // namespace mt

#endif  // MT_LEARNER_H_
