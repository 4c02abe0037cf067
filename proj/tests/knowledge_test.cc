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

#include <cstdlib>
#include <memory>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "mt/error.h"
#include "mt/jsonl.h"
#include "mt/knowledge.h"
#include "mt/masked_lm.h"
#include "test_util.h"

namespace mt {
namespace {

using ::mt::testing::DataDir;
using ::mt::testing::TempDir;

std::vector<Sentence> ToyCorpus() {
  return {Tokenize("how do i submit the homework"),
          Tokenize("how do i upload the homework")};
}

MaskedLmQuery ToyQuery(int k = 3) {
  MaskedLmQuery q;
  q.tokens = {"how", "do", "i", kMaskToken, "the", "homework"};
  q.mask_index = 3;
  q.k = k;
  return q;
}

std::vector<std::string> Words(const std::vector<WordScore>& scores) {
  std::vector<std::string> out;
  for (const auto& s : scores) out.push_back(s.word);
  return out;
}

std::vector<std::string> Phrases(
    const std::vector<ReplacementRecommendation>& recs) {
  std::vector<std::string> out;
  for (const auto& r : recs) out.push_back(r.phrase);
  return out;
}

TEST(MaskedLmQueryTest, Validation) {
  EXPECT_NO_THROW(ToyQuery().Validate());
  MaskedLmQuery q = ToyQuery();
  q.k = 0;
  EXPECT_THROW(q.Validate(), Error);
  q = ToyQuery();
  q.tokens[0] = kMaskToken;
  EXPECT_THROW(q.Validate(), Error);
  q = ToyQuery();
  q.mask_index = 2;
  EXPECT_THROW(q.Validate(), Error);
  EXPECT_THROW(MaskedLmQuery::Mask(Tokenize("a b"), 2, 3), Error);
}

TEST(CorpusMaskedLmTest, ToyCorpusFrequencyThenLex) {
  CorpusMaskedLm lm(ToyCorpus());
  const auto got = lm.TopK(ToyQuery());
  EXPECT_EQ(Words(got), (std::vector<std::string>{"submit", "upload"}));
  EXPECT_EQ(Words(lm.TopK(ToyQuery())), Words(got));
  double total = 0;
  for (const auto& s : got) total += s.confidence;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(CorpusMaskedLmTest, MaskedWordExcluded) {
  CorpusMaskedLm lm(ToyCorpus());
  const auto q = MaskedLmQuery::Mask(Tokenize("how do i submit the homework"), 3, 3);
  EXPECT_EQ(Words(lm.TopK(q)), (std::vector<std::string>{"upload"}));
}

TEST(CorpusMaskedLmTest, FrequencyOrdersCandidates) {
  std::vector<Sentence> corpus = ToyCorpus();
  corpus.push_back(Tokenize("how do i upload the essay"));
  CorpusMaskedLm lm(corpus);
  EXPECT_EQ(Words(lm.TopK(ToyQuery())),
            (std::vector<std::string>{"upload", "submit"}));
  EXPECT_EQ(lm.TopK(ToyQuery(1)).size(), 1u);
}

TEST(CorpusMaskedLmTest, EmptyCorpusGivesNothing) {
  CorpusMaskedLm lm({});
  EXPECT_TRUE(lm.TopK(ToyQuery()).empty());
}

TEST(WireFormatTest, RoundTrips) {
  const MaskedLmQuery q = MaskRequestFromJson(MaskRequestToJson(ToyQuery(4)));
  EXPECT_EQ(q.tokens, ToyQuery().tokens);
  EXPECT_EQ(q.k, 4);
  const std::vector<WordScore> c = {{"a", 0.75}, {"b", 0.25}};
  EXPECT_EQ(MaskResponseFromJson(MaskResponseToJson(c)), c);
  EXPECT_THROW(MaskRequestFromJson(Json::object()), Error);
}

// Minimal recommender service on a background thread.
class FakeRecommender {
 public:
  FakeRecommender() {
    server_.Post("/mask", [](const httplib::Request& req, httplib::Response& res) {
      const MaskedLmQuery q = MaskRequestFromJson(Json::parse(req.body));
      std::vector<WordScore> out = {{"submit", 0.5}, {"deliver", 0.3},
                                    {"post", 0.1}, {"send", 0.1}};
      out.resize(std::min<size_t>(out.size(), q.k));
      res.set_content(MaskResponseToJson(out).dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeRecommender() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(RemoteMaskedLmTest, ForwardsToService) {
  FakeRecommender service;
  auto fallback = std::make_shared<CorpusMaskedLm>(ToyCorpus());
  RemoteMaskedLm lm(service.url(), fallback);
  const auto q = MaskedLmQuery::Mask(Tokenize("how do i submit the homework"), 3, 2);
  EXPECT_EQ(Words(lm.TopK(q)), (std::vector<std::string>{"deliver", "post"}));
}

TEST(RemoteMaskedLmTest, UnreachableServiceFallsBack) {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  auto fallback = std::make_shared<CorpusMaskedLm>(ToyCorpus());
  RemoteMaskedLm lm("http://127.0.0.1:" + std::to_string(port), fallback,
                    std::chrono::milliseconds(300));
  EXPECT_EQ(Words(lm.TopK(ToyQuery())),
            (std::vector<std::string>{"submit", "upload"}));
}

TEST(MakeMaskedLmTest, HonoursEnvironment) {
  FakeRecommender service;
  setenv(kMaskedLmUrlEnv, service.url().c_str(), 1);
  auto remote = MakeMaskedLm(ToyCorpus());
  unsetenv(kMaskedLmUrlEnv);
  auto local = MakeMaskedLm(ToyCorpus());
  EXPECT_NE(dynamic_cast<const RemoteMaskedLm*>(remote.get()), nullptr);
  EXPECT_NE(dynamic_cast<const CorpusMaskedLm*>(local.get()), nullptr);
}

TEST(NormalizePhraseTest, TokenizesAndLimitsLength) {
  EXPECT_EQ(NormalizePhrase("  Turn   Over "), "turn over");
  EXPECT_THROW(NormalizePhrase("one two three four"), Error);
  EXPECT_THROW(NormalizePhrase("!!"), Error);
}

TEST(SynonymLexiconTest, ShippedWordForms) {
  const auto lexicon = SynonymLexicon::Load(DataDir() / "lexicon.jsonl");
  EXPECT_EQ(lexicon.Forms("submit"),
            (std::vector<std::string>{"submits", "submitted", "submitting",
                                      "submission"}));
  EXPECT_TRUE(lexicon.Forms("zzzz").empty());
  EXPECT_FALSE(lexicon.Synonyms("submit").empty());
}

TEST(SynonymLexiconTest, DropsSelfAndDuplicates) {
  SynonymLexicon lexicon;
  const std::vector<std::string> syn = {"give", "turn", "give", "hand in"};
  const std::vector<std::string> forms = {"turns", "turn"};
  lexicon.Add("turn", syn, forms);
  EXPECT_EQ(lexicon.Synonyms("turn"),
            (std::vector<std::string>{"give", "hand in"}));
  EXPECT_EQ(lexicon.Forms("turn"), (std::vector<std::string>{"turns"}));
}

TEST(ValidatedStoreTest, PrependDedupOrder) {
  ValidatedStore store;
  const std::vector<std::string> first = {"submit"};
  const std::vector<std::string> second = {"give", "submit"};
  store.Record("turn", first);
  store.Record("turn", second);
  EXPECT_EQ(store.Lookup("turn"), (std::vector<std::string>{"give", "submit"}));
  const std::vector<std::string> third = {"put"};
  store.Record("turn", third);
  EXPECT_EQ(store.Lookup("turn"),
            (std::vector<std::string>{"put", "give", "submit"}));
}

TEST(ValidatedStoreTest, Preconditions) {
  ValidatedStore store;
  EXPECT_THROW(store.Record("turn", {}), Error);
  const std::vector<std::string> self = {"Turn"};
  EXPECT_THROW(store.Record("turn", self), Error);
  EXPECT_TRUE(store.Lookup("turn").empty());
}

TEST(ValidatedStoreTest, PersistsAcrossRestart) {
  TempDir dir;
  const auto log = dir / "validated.jsonl";
  {
    ValidatedStore store(log);
    const std::vector<std::string> a = {"submit"};
    const std::vector<std::string> b = {"turn over", "give", "submit", "put"};
    store.Record("turn", a);
    store.Record("turn", b);
  }
  ValidatedStore reopened(log);
  EXPECT_EQ(reopened.Lookup("turn"),
            (std::vector<std::string>{"turn over", "give", "submit", "put"}));
}

TEST(ValidatedStoreTest, WriteFailureKeepsMemory) {
  TempDir dir;
  ValidatedStore store(dir / "missing_dir" / "validated.jsonl");
  const std::vector<std::string> a = {"give"};
  try {
    store.Record("turn", a);
    FAIL() << "expected an I/O error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  EXPECT_EQ(store.Lookup("turn"), (std::vector<std::string>{"give"}));
}

KnowledgeBase MakeKb(std::shared_ptr<ValidatedStore> store,
                     std::vector<Sentence> corpus) {
  auto lexicon = std::make_shared<SynonymLexicon>();
  const std::vector<std::string> syn = {"give", "hand in"};
  const std::vector<std::string> forms = {"turns", "turned"};
  lexicon->Add("turn", syn, forms);
  return KnowledgeBase(lexicon, std::move(store),
                       std::make_shared<CorpusMaskedLm>(corpus));
}

TEST(KnowledgeBaseTest, ValidatedFirstThenLexiconThenMaskedLm) {
  auto kb = MakeKb(std::make_shared<ValidatedStore>(),
                   {Tokenize("how do i hand in the report"),
                    Tokenize("how do i send in the report")});
  const Sentence s = Tokenize("how do i turn in the report");
  const std::vector<std::string> v = {"turn over", "give", "submit", "put"};
  kb.RecordValidated("turn", v);
  const auto recs = kb.Recommend("turn", s, 3);
  ASSERT_GE(recs.size(), 7u);
  EXPECT_EQ(Phrases(recs),
            (std::vector<std::string>{"turn over", "give", "submit", "put",
                                      "hand in", "turns", "turned", "hand",
                                      "send"}));
  EXPECT_EQ(recs[1].source, RecommendationSource::kValidated);
  EXPECT_EQ(recs[4].source, RecommendationSource::kLexicon);
  EXPECT_EQ(recs[7].source, RecommendationSource::kMaskedLm);
}

TEST(KnowledgeBaseTest, EmptyKbGivesEmptyList) {
  KnowledgeBase kb(std::make_shared<SynonymLexicon>(),
                   std::make_shared<ValidatedStore>(),
                   std::make_shared<CorpusMaskedLm>(std::vector<Sentence>{}));
  EXPECT_TRUE(kb.Recommend("novel", Tokenize("a novel word"), 1).empty());
}

TEST(KnowledgeBaseTest, PositionMustAddressWord) {
  auto kb = MakeKb(std::make_shared<ValidatedStore>(), {});
  EXPECT_THROW(kb.Recommend("turn", Tokenize("how do i turn"), 0), Error);
  EXPECT_THROW(kb.Recommend("turn", Tokenize("how do i turn"), 9), Error);
}

TEST(KnowledgeBaseTest, WordFormsExcludeWord) {
  auto kb = MakeKb(std::make_shared<ValidatedStore>(), {});
  EXPECT_EQ(kb.WordForms("turn"), (std::vector<std::string>{"turns", "turned"}));
  EXPECT_TRUE(kb.WordForms("unknown").empty());
}

TEST(KnowledgeBaseTest, OpenPersistsValidatedEntries) {
  unsetenv(kMaskedLmUrlEnv);
  TempDir dir;
  std::filesystem::copy_file(DataDir() / "lexicon.jsonl", dir / "lexicon.jsonl");
  const Sentence s = Tokenize("how do i turn in the report");
  std::vector<std::string> before;
  {
    KnowledgeBase kb = KnowledgeBase::Open(dir.path(), ToyCorpus());
    const std::vector<std::string> v = {"give"};
    kb.RecordValidated("turn", v);
    before = Phrases(kb.Recommend("turn", s, 3));
  }
  KnowledgeBase kb = KnowledgeBase::Open(dir.path(), ToyCorpus());
  EXPECT_EQ(Phrases(kb.Recommend("turn", s, 3)), before);
  EXPECT_EQ(before.front(), "give");
  EXPECT_THROW(KnowledgeBase::Open(dir / "absent", ToyCorpus()), Error);
}

}  // namespace
}  // namespace mt
