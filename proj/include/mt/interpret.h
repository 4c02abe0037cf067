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

#ifndef MT_INTERPRET_H_
#define MT_INTERPRET_H_

#include <vector>

#include "mt/corpus.h"
#include "mt/learner.h"

namespace mt {

// KL(p || q) in nats. Throws kInvalidArgument on a size mismatch.
double KlDivergence(const LabelDistribution& p, const LabelDistribution& q);

enum class KlDirection {
  kDeletedFromOriginal,  // KL(P_deleted || P_original)
  kOriginalFromDeleted,  // KL(P_original || P_deleted)
};

// Per-token importance, aligned with the sentence tokens.
struct ImportanceProfile {
  std::vector<double> scores;

  // Scores divided by their maximum; an all-zero profile stays zero.
  std::vector<double> Normalized() const;
};

// Leave-one-out importance: the score at position j is the divergence
// between the prediction with occurrence j removed and the prediction on
// the full sentence. For a single-token sentence the reduced input is the
// empty bag, i.e. the bias-only prediction an all-OOV sentence gets.
ImportanceProfile WordImportance(
    const LinearModel& model, const Sentence& s,
    KlDirection direction = KlDirection::kDeletedFromOriginal);

}  // namespace mt

#endif  // MT_INTERPRET_H_
