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

#include "mt/selector.h"

#include <algorithm>
#include <cmath>

#include "mt/error.h"

namespace mt {

double ConfusionScore(const LabelDistribution& dist,
                      const ConfusionOptions& options) {
  if (!(options.threshold >= 0.0 && options.threshold < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "confusion threshold must be in [0, 1)");
  }
  std::vector<double> kept;
  kept.reserve(dist.size());
  for (double p : dist.probs) {
    if (p >= options.threshold) kept.push_back(p);
  }
  if (kept.empty()) kept = dist.probs;
  double mass = 1.0;
  if (options.renormalize) {
    mass = 0.0;
    for (double p : kept) mass += p;
  }
  double entropy = 0.0;
  for (double p : kept) {
    const double q = p / mass;
    if (q > 0.0) entropy -= q * std::log(q);
  }
  return std::max(entropy, 0.0);
}

std::vector<RankedCandidate> RankPool(const LinearModel& model,
                                      std::span<const LabeledExample> pool,
                                      const ConfusionOptions& options, int k) {
  if (pool.empty()) Fail(ErrorCode::kInvalidArgument, "empty pool");
  k = std::min(k, model.num_intents());
  std::vector<RankedCandidate> ranked;
  ranked.reserve(pool.size());
  for (const LabeledExample& example : pool) {
    const LabelDistribution dist = Predict(model, example.sentence);
    ranked.push_back({example.id, example.sentence,
                      ConfusionScore(dist, options),
                      TopK(model.inventory(), dist, k)});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.confusion != b.confusion) return a.confusion > b.confusion;
              return a.example_id < b.example_id;
            });
  return ranked;
}

size_t MostConfusing(const LinearModel& model,
                     std::span<const LabeledExample> pool,
                     std::span<const size_t> indices,
                     const ConfusionOptions& options) {
  if (indices.empty()) Fail(ErrorCode::kInvalidArgument, "empty pool");
  size_t best = indices.front();
  double best_score = -1.0;
  for (size_t i : indices) {
    const double score = ConfusionScore(Predict(model, pool[i].sentence), options);
    if (score > best_score ||
        (score == best_score && pool[i].id < pool[best].id)) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace mt
