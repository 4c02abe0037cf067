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

#ifndef MT_SELECTOR_H_
#define MT_SELECTOR_H_

#include <span>
#include <string>
#include <vector>

#include "mt/corpus.h"
#include "mt/learner.h"

namespace mt {

inline constexpr double kDefaultConfusionThreshold = 0.01;

struct ConfusionOptions {
  double threshold = kDefaultConfusionThreshold;
  // When false the surviving probabilities are used as-is.
  bool renormalize = true;
};

// Shannon entropy (nats) over the classes whose probability is at least
// the threshold. If nothing survives, the full distribution is used.
double ConfusionScore(const LabelDistribution& dist,
                      const ConfusionOptions& options = {});

struct RankedCandidate {
  std::string example_id;
  Sentence sentence;
  double confusion = 0.0;
  std::vector<ScoredIntent> top_k;
};

// Scores every pool example against the current model and sorts by
// confusion descending, breaking ties by ascending example id.
std::vector<RankedCandidate> RankPool(const LinearModel& model,
                                      std::span<const LabeledExample> pool,
                                      const ConfusionOptions& options = {},
                                      int k = kDefaultTopK);

// Index (into `pool`) of the head RankPool would return when restricted to
// `indices`, without materializing the ranking.
size_t MostConfusing(const LinearModel& model,
                     std::span<const LabeledExample> pool,
                     std::span<const size_t> indices,
                     const ConfusionOptions& options = {});

}  // namespace mt

#endif  // MT_SELECTOR_H_
