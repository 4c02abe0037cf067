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

#include "mt/interpret.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "mt/error.h"

namespace mt {

double KlDivergence(const LabelDistribution& p, const LabelDistribution& q) {
  if (p.size() != q.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "KL divergence of distributions with sizes " +
             std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    kl += p.probs[i] * std::log(p.probs[i] / q.probs[i]);
  }
  // Rounding can leave a tiny negative residue when p == q.
  return std::max(kl, 0.0);
}

std::vector<double> ImportanceProfile::Normalized() const {
  std::vector<double> out(scores.size(), 0.0);
  const double peak =
      scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end());
  if (peak <= 0.0) return out;
  for (size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] / peak;
  return out;
}

ImportanceProfile WordImportance(const LinearModel& model, const Sentence& s,
                                 KlDirection direction) {
  const FeatureVector full = model.Features(s);
  const LabelDistribution original = PredictFeatures(model, full);
  ImportanceProfile profile;
  profile.scores.reserve(s.size());
  for (const std::string& token : s.tokens) {
    const int feature = model.vocabulary().Lookup(token);
    if (feature == Vocabulary::kSink) {
      profile.scores.push_back(0.0);
      continue;
    }
    // Removing one occurrence decrements that feature's count.
    FeatureVector reduced;
    reduced.reserve(full.size());
    for (const auto& [index, count] : full) {
      if (index != feature) {
        reduced.emplace_back(index, count);
      } else if (count > 1.0) {
        reduced.emplace_back(index, count - 1.0);
      }
    }
    const LabelDistribution deleted = PredictFeatures(model, reduced);
    profile.scores.push_back(direction == KlDirection::kDeletedFromOriginal
                                 ? KlDivergence(deleted, original)
                                 : KlDivergence(original, deleted));
  }
  return profile;
}

}  // namespace mt
