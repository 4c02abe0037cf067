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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "mt/corpus.h"
#include "mt/error.h"
#include "mt/jsonl.h"
#include "test_util.h"

namespace mt {
namespace {

using ::mt::testing::TempDir;
using ::mt::testing::TestDataDir;

TEST(TokenizeTest, MatchesHandTable) {
  const auto rows = ReadJsonl(TestDataDir() / "tokenize_table.jsonl");
  ASSERT_FALSE(rows.empty());
  for (const Json& row : rows) {
    const std::string text = row.at("text").get<std::string>();
    EXPECT_EQ(Tokenize(text).tokens,
              row.at("tokens").get<std::vector<std::string>>())
        << text;
  }
}

TEST(TokenizeTest, KeepsRawText) {
  EXPECT_EQ(Tokenize("exam 2!!!").raw, "exam 2!!!");
}

TEST(TokenizeTest, RejectsEmptyInput) {
  EXPECT_THROW(Tokenize(""), Error);
  EXPECT_THROW(Tokenize("?!  ..."), Error);
}

TEST(TokenizeTest, OutputIsLowercaseAndIdempotent) {
  const Sentence s = Tokenize("Where Do I UPLOAD it");
  for (const std::string& t : s.tokens) {
    EXPECT_TRUE(std::none_of(t.begin(), t.end(), ::isupper)) << t;
  }
  EXPECT_EQ(Tokenize(JoinTokens(s.tokens)).tokens, s.tokens);
}

TEST(InventoryTest, AssignsIdsInOrder) {
  IntentInventory inv({"submission", "deadline"});
  EXPECT_EQ(inv.size(), 2);
  EXPECT_EQ(inv.IdOf("deadline"), 1);
  EXPECT_EQ(inv.name(0), "submission");
  EXPECT_FALSE(inv.Find("grading").has_value());
  EXPECT_THROW(inv.IdOf("grading"), Error);
}

TEST(InventoryTest, RejectsDuplicatesAndEmptyNames) {
  EXPECT_THROW(IntentInventory({"a", "a"}), Error);
  EXPECT_THROW(IntentInventory({"a", ""}), Error);
}

Template MakeTemplate(std::string id, std::string intent, std::string pattern,
                      std::map<std::string, std::vector<std::string>> ents,
                      std::vector<std::string> keywords = {}) {
  Template t;
  t.id = std::move(id);
  t.intent = std::move(intent);
  t.pattern = std::move(pattern);
  t.entities = std::move(ents);
  t.keywords = std::move(keywords);
  return t;
}

TEST(ExpandTemplateTest, OnePlaceholder) {
  IntentInventory inv({"submission"});
  const auto out = ExpandTemplate(
      MakeTemplate("t000", "submission", "How do I submit the {object}?",
                   {{"object", {"assignment 1", "exam 2"}}}, {"submit"}),
      inv);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& e : out) {
    EXPECT_EQ(e.label, 0);
    EXPECT_EQ(e.origin, Origin::kTemplate);
  }
  EXPECT_EQ(out[0].sentence.tokens,
            (std::vector<std::string>{"how", "do", "i", "submit", "the",
                                      "assignment", "1"}));
  EXPECT_NE(out[0].id, out[1].id);
}

TEST(ExpandTemplateTest, NoPlaceholdersGivesOneExample) {
  IntentInventory inv({"teachingstaff"});
  const auto out = ExpandTemplate(
      MakeTemplate("t001", "teachingstaff", "Who teaches this class?", {}),
      inv);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].sentence.tokens.size(), 4u);
}

TEST(ExpandTemplateTest, CrossProductOfTwoPlaceholders) {
  IntentInventory inv({"deadline"});
  const auto out = ExpandTemplate(
      MakeTemplate("t002", "deadline", "When is {a} due {b}?",
                   {{"a", {"quiz", "lab"}}, {"b", {"today", "friday", "soon"}}}),
      inv);
  ASSERT_EQ(out.size(), 6u);
  std::set<std::string> texts;
  for (const auto& e : out) texts.insert(JoinTokens(e.sentence.tokens));
  EXPECT_EQ(texts.size(), 6u);
  for (const char* a : {"quiz", "lab"}) {
    for (const char* b : {"today", "friday", "soon"}) {
      EXPECT_TRUE(texts.count(std::string("when is ") + a + " due " + b))
          << a << " " << b;
    }
  }
}

TEST(ExpandTemplateTest, MissingEntitiesFail) {
  IntentInventory inv({"deadline"});
  EXPECT_THROW(
      ExpandTemplate(MakeTemplate("t003", "deadline", "When is {a}?", {}), inv),
      Error);
}

TEST(ValidateTemplateTest, KeywordMustBeInFixedText) {
  EXPECT_NO_THROW(ValidateTemplate(MakeTemplate(
      "t0", "x", "How do I submit {o}?", {{"o", {"it"}}}, {"submit"})));
  EXPECT_THROW(ValidateTemplate(MakeTemplate("t0", "x", "How do I submit {o}?",
                                             {{"o", {"it"}}}, {"upload"})),
               Error);
}

TEST(TemplateIdOfTest, ParsesExampleIds) {
  EXPECT_EQ(TemplateIdOf("t012.0003"), "t012");
  EXPECT_EQ(TemplateIdOf("x001.0000"), "x001");
  EXPECT_FALSE(TemplateIdOf("manual-1").has_value());
  EXPECT_FALSE(TemplateIdOf("t012.0003~v1").has_value());
}

std::vector<Template> TenTemplates() {
  std::vector<Template> ts;
  for (int i = 0; i < 10; ++i) {
    ts.push_back(MakeTemplate("t" + std::to_string(100 + i), "submission",
                              "question " + std::to_string(i) + " about {o}",
                              {{"o", {"a", "b"}}}));
  }
  return ts;
}

TEST(SplitDatasetTest, TenTemplatesAtOneFifth) {
  const auto ts = TenTemplates();
  IntentInventory inv({"submission"});
  const DatasetSplit split = SplitDataset(ts, inv, 0.2, 7);
  EXPECT_EQ(split.bootstrap_templates.size(), 2u);
  EXPECT_EQ(split.novel_templates.size(), 8u);
  EXPECT_EQ(split.bootstrap.size(), 4u);
  EXPECT_EQ(split.novel_pool.size(), 16u);
}

TEST(SplitDatasetTest, SplitsAtTemplateLevel) {
  const auto ts = TenTemplates();
  IntentInventory inv({"submission"});
  const DatasetSplit split = SplitDataset(ts, inv, 0.3, 11);
  std::set<std::string> boot(split.bootstrap_templates.begin(),
                             split.bootstrap_templates.end());
  for (const auto& e : split.bootstrap) {
    EXPECT_TRUE(boot.count(*TemplateIdOf(e.id)));
  }
  for (const auto& e : split.novel_pool) {
    EXPECT_FALSE(boot.count(*TemplateIdOf(e.id)));
  }
}

TEST(SplitDatasetTest, SameSeedGivesIdenticalManifest) {
  const auto ts = TenTemplates();
  IntentInventory inv({"submission"});
  const auto a = SplitDataset(ts, inv, 0.2, 7);
  const auto b = SplitDataset(ts, inv, 0.2, 7);
  EXPECT_EQ(a.bootstrap_templates, b.bootstrap_templates);
  EXPECT_EQ(a.bootstrap, b.bootstrap);
  EXPECT_EQ(a.novel_pool, b.novel_pool);
}

TEST(SplitDatasetTest, RoundingKeepsOnePerSide) {
  EXPECT_EQ(BootstrapTemplateCount(10, 0.2), 2);
  EXPECT_EQ(BootstrapTemplateCount(3, 0.01), 1);
  EXPECT_EQ(BootstrapTemplateCount(3, 0.99), 2);
  EXPECT_EQ(BootstrapTemplateCount(766, 162.0 / 766.0), 162);
}

TEST(SplitDatasetTest, RejectsBadFraction) {
  const auto ts = TenTemplates();
  IntentInventory inv({"submission"});
  EXPECT_THROW(SplitDataset(ts, inv, 0.0, 7), Error);
  EXPECT_THROW(SplitDataset(ts, inv, 1.0, 7), Error);
}

TEST(DatasetIoTest, RoundTripsExamples) {
  TempDir dir;
  IntentInventory inv({"submission", "deadline"});
  std::vector<LabeledExample> examples = {
      ::mt::testing::MakeExample("t000.0000", "How do I submit it?", 0),
      ::mt::testing::MakeExample("t001.0000", "When is it due?", 1)};
  examples[1].origin = Origin::kAugmented;
  examples[1].provenance = Provenance{"t000.0000", 3, "turn in", "validated"};
  SaveDataset(dir / "d.jsonl", examples, inv);
  EXPECT_EQ(LoadDataset(dir / "d.jsonl", inv), examples);
}

TEST(DatasetIoTest, ShippedTemplatesLoad) {
  const auto ts = LoadTemplates(::mt::testing::DataDir() / "templates.jsonl");
  EXPECT_EQ(ts.size(), 40u);
  EXPECT_EQ(InventoryFromTemplates(ts).size(), 8);
}

TEST(SampleExamplesTest, DeterministicSubset) {
  std::vector<LabeledExample> all;
  for (int i = 0; i < 50; ++i) {
    all.push_back(::mt::testing::MakeExample("e" + std::to_string(i),
                                             "word " + std::to_string(i), 0));
  }
  const auto a = SampleExamples(all, 10, 3);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a, SampleExamples(all, 10, 3));
  std::set<std::string> ids;
  for (const auto& e : a) ids.insert(e.id);
  EXPECT_EQ(ids.size(), 10u);
  EXPECT_EQ(SampleExamples(all, 100, 3).size(), 50u);
}

}  // namespace
}  // namespace mt
