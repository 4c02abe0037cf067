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

#ifndef MT_SIM_TEACHER_H_
#define MT_SIM_TEACHER_H_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mt/augment.h"
#include "mt/corpus.h"
#include "mt/knowledge.h"
#include "mt/session.h"

namespace mt {

// Gold replacement phrases the simulated teacher is willing to validate.
// JSONL: {"word": text, "synonyms": [text]}.
class GoldSynonymTable {
 public:
  static GoldSynonymTable Load(const std::filesystem::path& path);
  void Add(std::string_view word, std::span<const std::string> phrases);
  bool Contains(std::string_view word, std::string_view phrase) const;
  const std::set<std::string>& Lookup(std::string_view word) const;

 private:
  std::map<std::string, std::set<std::string>, std::less<>> table_;
};

std::set<std::string> LoadStoplist(const std::filesystem::path& path);

struct GoldAnnotation {
  int label = 0;
  std::vector<std::string> keywords;
};

// Gold annotations keyed by source template id.
class GoldIndex {
 public:
  GoldIndex(std::span<const Template> templates, const IntentInventory& inventory);
  // nullptr when the example did not come from a known template.
  const GoldAnnotation* Find(std::string_view example_id) const;

 private:
  std::map<std::string, GoldAnnotation, std::less<>> by_template_;
};

// Where important-word replacements come from.
enum class ReplacementSource {
  kGoldValidated,     // KB recommendations the gold table approves
  kLexiconMaskedLm,   // lexicon synonyms that the masked LM also proposes
};

struct SimTeacherProfile {
  // Skip when the top-1 prediction is already right and confusion is at or
  // below this value.
  double accept_confusion = 0.5;
  // After this many consecutive skips the teacher accepts the next offer
  // regardless of the skip rule. Zero disables the limit.
  int patience = 5;
  bool filter_examples = true;
  bool mark_important = true;
  bool mark_inconsequential = true;
  ReplacementSource replacements = ReplacementSource::kGoldValidated;
  int intersection_masked_k = 10;
  std::set<std::string> stoplist;
  TimeModel time;
};

// Accept/skip plus, on accept, the label and word-level annotations a
// teacher following `profile` would give. Deterministic. Throws kNotFound
// when `gold` is null.
FeedbackRecord SimulateTeacher(const LabeledExample& example,
                               const GoldAnnotation* gold,
                               const MachineStateView& view,
                               const SimTeacherProfile& profile,
                               const GoldSynonymTable& gold_synonyms,
                               const KnowledgeBase& kb);

}  // namespace mt

#endif  // MT_SIM_TEACHER_H_
