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

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mt/error.h"
#include "mt/learner.h"
#include "oracles.h"
#include "test_util.h"

namespace mt {
namespace {

using ::mt::testing::CourseExamples;
using ::mt::testing::CourseIntents;
using ::mt::testing::MakeExample;
using ::mt::testing::RandomModel;

const std::vector<std::string> kWords = {"how", "do",   "i",    "submit",
                                         "who", "teaches", "when", "due",
                                         "homework", "the"};

TEST(VocabularyTest, SinkIsIndexZero) {
  Vocabulary v;
  EXPECT_EQ(v.size(), 1);
  EXPECT_EQ(v.Lookup("anything"), Vocabulary::kSink);
  const int a = v.Intern("submit");
  EXPECT_EQ(a, 1);
  EXPECT_EQ(v.Intern("submit"), a);
  EXPECT_EQ(v.Lookup("submit"), a);
}

TEST(VocabularyTest, FrozenMapsUnknownToSink) {
  Vocabulary v;
  v.Intern("a");
  v.set_frozen(true);
  EXPECT_EQ(v.Intern("b"), Vocabulary::kSink);
  EXPECT_EQ(v.size(), 2);
}

TEST(FeaturesTest, CountsTermFrequency) {
  LinearModel model = RandomModel(CourseIntents(), kWords, 1);
  const FeatureVector x =
      model.Features(SentenceFromTokens({"do", "do", "unknownword", "i"}));
  double total = 0;
  for (const auto& [f, count] : x) {
    total += count;
    if (f == model.vocabulary().Lookup("do")) {
      EXPECT_EQ(count, 2.0);
    }
  }
  EXPECT_EQ(total, 4.0);
}

TEST(PredictTest, ZeroModelIsUniform) {
  LinearModel model(CourseIntents(), Hyperparams::Online(), 0);
  const LabelDistribution d = Predict(model, Tokenize("anything at all"));
  ASSERT_EQ(d.size(), 3u);
  for (double p : d.probs) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
}

TEST(PredictTest, DistributionsAreNormalizedAndPositive) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    LinearModel model = RandomModel(CourseIntents(), kWords, trial, 4.0);
    std::vector<std::string> tokens;
    const int n = 1 + trial % 7;
    for (int i = 0; i < n; ++i) tokens.push_back(kWords[rng() % kWords.size()]);
    const LabelDistribution d = Predict(model, SentenceFromTokens(tokens));
    const double sum = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-9);
    for (double p : d.probs) EXPECT_GT(p, 0.0);
  }
}

TEST(PredictTest, MatchesIndependentScoreOracle) {
  const auto data = CourseExamples();
  const LinearModel model =
      Train(data, CourseIntents(), Hyperparams::Bootstrap(), 3);
  const Sentence s = Tokenize("how do i turn in an assignment");
  const auto oracle = oracle::Distribution(model, s.tokens);
  const LabelDistribution d = Predict(model, s);
  for (size_t c = 0; c < oracle.size(); ++c) EXPECT_NEAR(d.probs[c], oracle[c], 1e-12);
  EXPECT_EQ(d.Argmax(),
            std::max_element(oracle.begin(), oracle.end()) - oracle.begin());
}

TEST(SoftmaxTest, StableForLargeLogits) {
  const std::vector<double> logits = {1000.0, 1000.0, -1000.0};
  const LabelDistribution d = Softmax(logits);
  EXPECT_NEAR(d.probs[0], 0.5, 1e-12);
  EXPECT_NEAR(d.probs[1], 0.5, 1e-12);
}

TEST(TopKTest, UniformTieBreaksById) {
  IntentInventory inv({"a", "b", "c", "d", "e"});
  LabelDistribution d{{0.2, 0.2, 0.2, 0.2, 0.2}};
  const auto top = TopK(inv, d, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].intent.id, 0);
  EXPECT_EQ(top[1].intent.id, 1);
  EXPECT_EQ(top[2].intent.id, 2);
}

TEST(TopKTest, FullKIsPermutationSortedByConfidence) {
  IntentInventory inv({"a", "b", "c", "d"});
  LabelDistribution d{{0.1, 0.4, 0.3, 0.2}};
  const auto top = TopK(inv, d, 4);
  ASSERT_EQ(top.size(), 4u);
  EXPECT_EQ(top[0].intent.name, "b");
  EXPECT_EQ(top[1].intent.name, "c");
  EXPECT_EQ(top[2].intent.name, "d");
  EXPECT_EQ(top[3].intent.name, "a");
  EXPECT_DOUBLE_EQ(top[0].confidence, 0.4);
}

TEST(TopKTest, RejectsBadK) {
  IntentInventory inv({"a", "b"});
  LabelDistribution d{{0.5, 0.5}};
  EXPECT_THROW(TopK(inv, d, 0), Error);
  EXPECT_THROW(TopK(inv, d, 3), Error);
}

TEST(GradientTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    LinearModel model = RandomModel(CourseIntents(), kWords, 100 + trial);
    std::vector<std::string> tokens;
    for (int i = 0; i < 5; ++i) tokens.push_back(kWords[rng() % kWords.size()]);
    const auto check = oracle::CheckGradient(model, tokens, trial % 3);
    EXPECT_LT(check.max_relative_error, 1e-5) << "trial " << trial;
    EXPECT_GT(check.checked, 3);
  }
}

TEST(GradientTest, LossMatchesOracle) {
  LinearModel model = RandomModel(CourseIntents(), kWords, 8);
  const std::vector<std::string> tokens = {"who", "teaches", "who", "x"};
  EXPECT_NEAR(ExampleLoss(model, model.Features(SentenceFromTokens(tokens)), 1),
              oracle::Loss(model, tokens, 1), 1e-12);
}

TEST(TrainTest, SeparablePairReachesZeroError) {
  IntentInventory inv({"submission", "teachingstaff"});
  std::vector<LabeledExample> data = {MakeExample("a", "submit homework", 0),
                                      MakeExample("b", "who teaches", 1)};
  Hyperparams hp{0.1, 10, 1e-4, 0};
  const LinearModel model = Train(data, inv, hp, 1);
  EXPECT_EQ(ErrorRate(model, data), 0.0);
  EXPECT_EQ(model.training_set(), data);
}

TEST(TrainTest, SameSeedSameWeights) {
  const auto data = CourseExamples();
  const LinearModel a = Train(data, CourseIntents(), Hyperparams::Bootstrap(), 9);
  const LinearModel b = Train(data, CourseIntents(), Hyperparams::Bootstrap(), 9);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
  EXPECT_TRUE(a == b);
}

TEST(TrainTest, RejectsEmptyAndBadLabels) {
  EXPECT_THROW(Train({}, CourseIntents(), Hyperparams::Bootstrap(), 1), Error);
  std::vector<LabeledExample> bad = {MakeExample("a", "x", 7)};
  EXPECT_THROW(Train(bad, CourseIntents(), Hyperparams::Bootstrap(), 1), Error);
}

TEST(HyperparamsTest, Validation) {
  EXPECT_NO_THROW(Hyperparams::Online().Validate());
  EXPECT_THROW((Hyperparams{0.0, 5, 1e-4, 32}).Validate(), Error);
  EXPECT_THROW((Hyperparams{0.1, 0, 1e-4, 32}).Validate(), Error);
  EXPECT_THROW((Hyperparams{0.1, 5, -1.0, 32}).Validate(), Error);
  EXPECT_THROW((Hyperparams{0.1, 5, 1e-4, -1}).Validate(), Error);
}

TEST(UpdateTest, DegenerateCaseIsPlainSgd) {
  const auto data = CourseExamples();
  Hyperparams hp{0.1, 4, 1e-4, 0};
  LinearModel a = Train(data, CourseIntents(), hp, 2);
  LinearModel b = a;
  const LabeledExample taught = MakeExample("n", "who grades the essay", 1);
  Update(a, taught, {}, 77);
  const FeatureVector x = b.InternFeatures(taught.sentence);
  for (int e = 0; e < hp.epochs; ++e) SgdStep(b, x, taught.label);
  EXPECT_EQ(a.weights(), b.weights());
  EXPECT_EQ(a.bias(), b.bias());
}

TEST(UpdateTest, GrowsTrainingSetAndVocabulary) {
  const auto data = CourseExamples();
  LinearModel model = Train(data, CourseIntents(), Hyperparams::Online(), 2);
  const int vocab = model.vocabulary().size();
  const LabeledExample taught = MakeExample("n", "hand in the report", 0);
  const std::vector<LabeledExample> vars = {
      MakeExample("n~v0", "deliver in the report", 0)};
  Update(model, taught, vars, 5);
  EXPECT_EQ(model.training_set().size(), data.size() + 2);
  EXPECT_GT(model.vocabulary().size(), vocab);
  EXPECT_EQ(static_cast<int>(model.weights().size()),
            model.vocabulary().size() * model.num_intents());
}

TEST(UpdateTest, RejectsVariationWithDifferentLabel) {
  LinearModel model =
      Train(CourseExamples(), CourseIntents(), Hyperparams::Online(), 2);
  const LinearModel before = model;
  const std::vector<LabeledExample> vars = {MakeExample("v", "who", 1)};
  EXPECT_THROW(Update(model, MakeExample("n", "submit", 0), vars, 1), Error);
  EXPECT_TRUE(model == before);
}

TEST(UpdateTest, DeterministicForSeed) {
  LinearModel a = Train(CourseExamples(), CourseIntents(), Hyperparams::Online(), 2);
  LinearModel b = a;
  const LabeledExample taught = MakeExample("n", "hand in the report", 0);
  Update(a, taught, {}, 5);
  Update(b, taught, {}, 5);
  EXPECT_TRUE(a == b);
}

TEST(ErrorRateTest, AllRightAndAllWrong) {
  const auto data = CourseExamples();
  const LinearModel model = Train(data, CourseIntents(), Hyperparams::Bootstrap(), 4);
  ASSERT_EQ(ErrorRate(model, data), 0.0);
  std::vector<LabeledExample> flipped = data;
  for (auto& e : flipped) e.label = (e.label + 1) % 3;
  EXPECT_EQ(ErrorRate(model, flipped), 1.0);
  EXPECT_THROW(ErrorRate(model, {}), Error);
}

TEST(RunningAverageTest, Examples) {
  const std::vector<double> xs = {0.5, 0.3, 0.1};
  const auto avg = RunningAverage(xs);
  ASSERT_EQ(avg.size(), 3u);
  EXPECT_NEAR(avg[0], 0.5, 1e-15);
  EXPECT_NEAR(avg[1], 0.4, 1e-15);
  EXPECT_NEAR(avg[2], 0.3, 1e-15);
  const std::vector<double> flat(6, 0.25);
  EXPECT_EQ(RunningAverage(flat), flat);
}

TEST(RunningAverageTest, MatchesBruteForceMeans) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> xs(500);
  for (double& x : xs) x = u(rng);
  const auto avg = RunningAverage(xs);
  const auto ref = oracle::RunningMeans(xs);
  for (size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(avg[i], ref[i], 1e-12);
}

TEST(SweepTest, SinglePointIsReturned) {
  const auto data = CourseExamples();
  const std::vector<Hyperparams> grid = {{0.05, 3, 1e-3, 8}};
  const SweepResult r = Sweep(grid, data, data, CourseIntents(), 1);
  EXPECT_EQ(r.best, grid[0]);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.eval_errors.size(), 1u);
}

TEST(SweepTest, PicksLowestEvalError) {
  const auto data = CourseExamples();
  const std::vector<Hyperparams> grid = {{0.1, 30, 20.0, 0}, {0.1, 30, 1e-4, 0}};
  const SweepResult r = Sweep(grid, data, data, CourseIntents(), 1);
  EXPECT_EQ(r.best_index, 1u);
  EXPECT_LT(r.eval_errors[1], r.eval_errors[0]);
}

}  // namespace
}  // namespace mt
