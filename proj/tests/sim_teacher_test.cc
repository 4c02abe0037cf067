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

#include <gtest/gtest.h>

#include "mt/error.h"
#include "mt/jsonl.h"
#include "mt/sim_teacher.h"
#include "test_util.h"

namespace mt {
namespace {

using ::mt::testing::CourseIntents;
using ::mt::testing::DataDir;
using ::mt::testing::MakeExample;
using ::mt::testing::TempDir;

class FixedMaskedLm final : public MaskedLm {
 public:
  explicit FixedMaskedLm(std::vector<std::string> words) : words_(std::move(words)) {}
  std::vector<WordScore> TopK(const MaskedLmQuery& q) const override {
    std::vector<WordScore> out;
    for (const auto& w : words_) {
      if (static_cast<int>(out.size()) < q.k) out.push_back({w, 0.1});
    }
    return out;
  }

 private:
  std::vector<std::string> words_;
};

KnowledgeBase MakeKb() {
  auto lexicon = std::make_shared<SynonymLexicon>();
  const std::vector<std::string> syn = {"turn in", "obey", "hand in", "yield"};
  lexicon->Add("submit", syn, {});
  return KnowledgeBase(lexicon, std::make_shared<ValidatedStore>(),
                       std::make_shared<FixedMaskedLm>(
                           std::vector<std::string>{"upload", "yield", "send"}));
}

GoldSynonymTable Gold() {
  GoldSynonymTable table;
  const std::vector<std::string> phrases = {"turn in", "hand in", "deliver"};
  table.Add("submit", phrases);
  return table;
}

MachineStateView View(int top1, double confusion) {
  MachineStateView view;
  view.top_k = {{CourseIntents().label(top1), 0.9}};
  view.confusion = confusion;
  return view;
}

SimTeacherProfile Profile() {
  SimTeacherProfile p;
  p.stoplist = {"how", "do", "i", "the"};
  return p;
}

const GoldAnnotation kGold{0, {"submit"}};

TEST(SimTeacherTest, SkipsConfidentCorrectExamples) {
  const auto ex = MakeExample("t000.0001", "how do i submit the essay", 0);
  const auto fb = SimulateTeacher(ex, &kGold, View(0, 0.1), Profile(), Gold(), MakeKb());
  EXPECT_EQ(fb.action, FeedbackAction::kSkip);
  EXPECT_FALSE(fb.HasAnnotations());
  EXPECT_EQ(fb.sim_seconds, 1.0);
}

TEST(SimTeacherTest, AcceptsWrongOrConfusedExamples) {
  const auto ex = MakeExample("t000.0001", "how do i submit the essay", 0);
  EXPECT_EQ(SimulateTeacher(ex, &kGold, View(1, 0.1), Profile(), Gold(), MakeKb()).action,
            FeedbackAction::kAccept);
  EXPECT_EQ(SimulateTeacher(ex, &kGold, View(0, 0.9), Profile(), Gold(), MakeKb()).action,
            FeedbackAction::kAccept);
  SimTeacherProfile no_filter = Profile();
  no_filter.filter_examples = false;
  EXPECT_EQ(SimulateTeacher(ex, &kGold, View(0, 0.0), no_filter, Gold(), MakeKb()).action,
            FeedbackAction::kAccept);
}

TEST(SimTeacherTest, MarksKeywordsStopwordsAndGoldReplacements) {
  const auto ex = MakeExample("t000.0001", "how do i submit the essay", 2);
  const auto fb = SimulateTeacher(ex, &kGold, View(1, 0.9), Profile(), Gold(), MakeKb());
  EXPECT_EQ(fb.label, 0);
  EXPECT_EQ(fb.important, (std::set<int>{3}));
  EXPECT_EQ(fb.inconsequential, (std::set<int>{0, 1, 2, 4}));
  ASSERT_TRUE(fb.validated.count(3));
  EXPECT_EQ(fb.validated.at(3), (std::vector<std::string>{"turn in", "hand in"}));
  EXPECT_EQ(fb.sim_seconds, 80.0);
  EXPECT_NO_THROW(fb.Validate(ex.sentence.size(), 3));
}

TEST(SimTeacherTest, LexiconMaskedLmIntersection) {
  const auto ex = MakeExample("t000.0001", "how do i submit the essay", 0);
  SimTeacherProfile p = Profile();
  p.replacements = ReplacementSource::kLexiconMaskedLm;
  const auto fb = SimulateTeacher(ex, &kGold, View(1, 0.9), p, Gold(), MakeKb());
  EXPECT_EQ(fb.validated.at(3), (std::vector<std::string>{"yield"}));
}

TEST(SimTeacherTest, AblationSwitches) {
  const auto ex = MakeExample("t000.0001", "how do i submit the essay", 0);
  SimTeacherProfile p = Profile();
  p.mark_important = false;
  auto fb = SimulateTeacher(ex, &kGold, View(1, 0.9), p, Gold(), MakeKb());
  EXPECT_TRUE(fb.important.empty());
  EXPECT_TRUE(fb.validated.empty());
  EXPECT_EQ(fb.inconsequential.size(), 4u);
  p = Profile();
  p.mark_important = false;
  p.mark_inconsequential = false;
  fb = SimulateTeacher(ex, &kGold, View(1, 0.9), p, Gold(), MakeKb());
  EXPECT_FALSE(fb.HasAnnotations());
  EXPECT_EQ(fb.sim_seconds, 10.0);
}

TEST(SimTeacherTest, DeterministicAndRequiresGold) {
  const auto ex = MakeExample("t000.0001", "how do i submit the essay", 0);
  EXPECT_EQ(SimulateTeacher(ex, &kGold, View(1, 0.9), Profile(), Gold(), MakeKb()),
            SimulateTeacher(ex, &kGold, View(1, 0.9), Profile(), Gold(), MakeKb()));
  EXPECT_THROW(SimulateTeacher(ex, nullptr, View(1, 0.9), Profile(), Gold(), MakeKb()),
               Error);
}

TEST(GoldIndexTest, FindsTemplateAnnotations) {
  const auto templates = LoadTemplates(DataDir() / "templates.jsonl");
  const IntentInventory inv = InventoryFromTemplates(templates);
  GoldIndex index(templates, inv);
  const GoldAnnotation* g = index.Find("t000.0005");
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->keywords, (std::vector<std::string>{"submit"}));
  EXPECT_EQ(inv.name(g->label), "submission");
  EXPECT_EQ(index.Find("zzz"), nullptr);
  EXPECT_EQ(index.Find("t999.0000"), nullptr);
}

TEST(GoldSynonymTableTest, LoadsShippedTable) {
  const auto table = GoldSynonymTable::Load(DataDir() / "gold_synonyms.jsonl");
  EXPECT_TRUE(table.Contains("submit", "turn in"));
  EXPECT_FALSE(table.Contains("submit", "obey"));
  EXPECT_TRUE(table.Lookup("nonexistent").empty());
}

TEST(StoplistTest, SkipsComments) {
  TempDir dir;
  WriteFile(dir / "stop.txt", "# words\nthe a\nan\n");
  EXPECT_EQ(LoadStoplist(dir / "stop.txt"), (std::set<std::string>{"the", "a", "an"}));
  EXPECT_THROW(LoadStoplist(dir / "missing.txt"), Error);
  EXPECT_TRUE(LoadStoplist(DataDir() / "stoplist.txt").count("the"));
}

}  // namespace
}  // namespace mt
