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

#ifndef MT_AUGMENT_H_
#define MT_AUGMENT_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mt/corpus.h"
#include "mt/jsonl.h"
#include "mt/knowledge.h"
#include "mt/masked_lm.h"

namespace mt {

enum class FeedbackAction { kAccept, kSkip };

// One teacher interaction with an example.
struct FeedbackRecord {
  std::string example_id;
  int label = 0;
  std::set<int> important;
  std::set<int> inconsequential;
  // Accepted replacement phrases per important position.
  std::map<int, std::vector<std::string>> validated;
  FeedbackAction action = FeedbackAction::kAccept;
  double sim_seconds = 0.0;

  // True when anything beyond the label was provided.
  bool HasAnnotations() const {
    return !important.empty() || !inconsequential.empty() || !validated.empty();
  }

  // Throws kInvalidArgument on overlapping sets, out-of-range positions,
  // validated keys outside `important` or annotated skips.
  void ValidateAnnotations(size_t sentence_length) const;
  // ValidateAnnotations plus a label range check.
  void Validate(size_t sentence_length, int num_intents) const;

  bool operator==(const FeedbackRecord&) const = default;
};

Json FeedbackToJson(const FeedbackRecord& fb, const IntentInventory& inventory);
FeedbackRecord FeedbackFromJson(const Json& record,
                                const IntentInventory& inventory);

struct Variation {
  Sentence sentence;
  int label = 0;
  Provenance provenance;

  // Augmented training example with id "<source>~v<index>".
  LabeledExample ToExample(size_t index) const;
};

std::vector<LabeledExample> VariationsToExamples(
    const std::vector<Variation>& variations);

struct VariationOptions {
  int inconsequential_k = kInconsequentialTopK;
  // Apply one option at every annotated site simultaneously instead of one
  // edit per variation.
  bool cross_product = false;
  size_t max_cross_product = 256;
};

// Splices `phrase_tokens` over tokens[position].
std::vector<std::string> SpliceTokens(const std::vector<std::string>& tokens,
                                      size_t position,
                                      const std::vector<std::string>& phrase_tokens);

// Important positions are replaced by each teacher-validated phrase and
// inconsequential positions by each of the masked LM's top-k words, one
// edit per variation, in position order then recommendation order.
// Variations identical to the source or to an earlier variation are
// dropped.
std::vector<Variation> GenerateVariations(const LabeledExample& source,
                                          const FeedbackRecord& fb,
                                          const MaskedLm& masked_lm,
                                          const VariationOptions& options = {});

inline constexpr int kEdaVariationsPerExample = 16;

// Easy-data-augmentation baseline: each variation applies one uniformly
// chosen move among synonym replacement, insertion of a synonym of a random
// word, adjacent swap and deletion. Moves that need a synonym fall back to
// a swap when no token has one.
std::vector<Variation> EdaAugment(const LabeledExample& source, int n,
                                  const SynonymLexicon& lexicon, uint64_t seed);

}  // namespace mt

#endif  // MT_AUGMENT_H_
