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

#include "mt/sim_teacher.h"

#include <algorithm>
#include <fstream>

#include "mt/error.h"
#include "mt/jsonl.h"

namespace mt {
namespace {
const std::set<std::string> kNoPhrases;
}  // namespace

GoldSynonymTable GoldSynonymTable::Load(const std::filesystem::path& path) {
  GoldSynonymTable table;
  for (const Json& record : ReadJsonl(path)) {
    try {
      table.Add(record.at("word").get<std::string>(),
                record.at("synonyms").get<std::vector<std::string>>());
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kInvalidArgument,
           path.string() + ": bad gold synonym entry: " + e.what());
    }
  }
  return table;
}

void GoldSynonymTable::Add(std::string_view word,
                           std::span<const std::string> phrases) {
  auto& entry = table_[NormalizePhrase(word)];
  for (const std::string& phrase : phrases) entry.insert(NormalizePhrase(phrase));
}

bool GoldSynonymTable::Contains(std::string_view word,
                                std::string_view phrase) const {
  auto it = table_.find(word);
  return it != table_.end() && it->second.count(std::string(phrase)) > 0;
}

const std::set<std::string>& GoldSynonymTable::Lookup(
    std::string_view word) const {
  auto it = table_.find(word);
  return it == table_.end() ? kNoPhrases : it->second;
}

std::set<std::string> LoadStoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::set<std::string> words;
  std::string word;
  while (in >> word) {
    if (word[0] == '#') {
      std::getline(in, word);
      continue;
    }
    words.insert(word);
  }
  return words;
}

GoldIndex::GoldIndex(std::span<const Template> templates,
                     const IntentInventory& inventory) {
  for (const Template& t : templates) {
    by_template_[t.id] = {inventory.IdOf(t.intent), t.keywords};
  }
}

const GoldAnnotation* GoldIndex::Find(std::string_view example_id) const {
  auto template_id = TemplateIdOf(example_id);
  if (!template_id) return nullptr;
  auto it = by_template_.find(*template_id);
  return it == by_template_.end() ? nullptr : &it->second;
}

FeedbackRecord SimulateTeacher(const LabeledExample& example,
                               const GoldAnnotation* gold,
                               const MachineStateView& view,
                               const SimTeacherProfile& profile,
                               const GoldSynonymTable& gold_synonyms,
                               const KnowledgeBase& kb) {
  if (gold == nullptr) {
    Fail(ErrorCode::kNotFound, "no gold annotation for " + example.id);
  }
  FeedbackRecord fb;
  fb.example_id = example.id;
  fb.label = gold->label;

  const bool top1_right =
      !view.top_k.empty() && view.top_k.front().intent.id == gold->label;
  if (profile.filter_examples && top1_right &&
      view.confusion <= profile.accept_confusion) {
    fb.action = FeedbackAction::kSkip;
    fb.sim_seconds = profile.time.skip_seconds;
    return fb;
  }
  fb.action = FeedbackAction::kAccept;
  fb.sim_seconds = profile.time.label_seconds;

  const Sentence& s = example.sentence;
  const int n = static_cast<int>(s.size());
  if (profile.mark_important) {
    for (int p = 0; p < n; ++p) {
      if (std::find(gold->keywords.begin(), gold->keywords.end(),
                    s.tokens[p]) != gold->keywords.end()) {
        fb.important.insert(p);
      }
    }
  }
  if (profile.mark_inconsequential) {
    for (int p = 0; p < n; ++p) {
      if (!fb.important.count(p) && profile.stoplist.count(s.tokens[p])) {
        fb.inconsequential.insert(p);
      }
    }
  }

  for (int p : fb.important) {
    const std::string& word = s.tokens[p];
    std::vector<std::string> accepted;
    if (profile.replacements == ReplacementSource::kGoldValidated) {
      for (const ReplacementRecommendation& r : kb.Recommend(word, s, p)) {
        if (gold_synonyms.Contains(word, r.phrase)) accepted.push_back(r.phrase);
      }
    } else {
      const std::vector<WordScore> proposed = kb.masked_lm().TopK(
          MaskedLmQuery::Mask(s, p, profile.intersection_masked_k));
      for (const std::string& phrase : kb.lexicon().Synonyms(word)) {
        const bool also_proposed =
            std::any_of(proposed.begin(), proposed.end(),
                        [&](const WordScore& c) { return c.word == phrase; });
        if (also_proposed) accepted.push_back(phrase);
      }
    }
    if (!accepted.empty()) fb.validated[p] = std::move(accepted);
  }
  if (fb.HasAnnotations()) {
    fb.sim_seconds += profile.time.FeedbackExtraSeconds();
  }
  return fb;
}

}  // namespace mt
