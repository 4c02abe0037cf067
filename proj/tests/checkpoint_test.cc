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

#include <cstring>

#include <gtest/gtest.h>

#include "mt/checkpoint.h"
#include "mt/error.h"
#include "mt/jsonl.h"
#include "test_util.h"

namespace mt {
namespace {

using ::mt::testing::CourseExamples;
using ::mt::testing::CourseIntents;
using ::mt::testing::RandomModel;
using ::mt::testing::TempDir;

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  LinearModel model = RandomModel(CourseIntents(), {"a", "b", "c"}, 12, 3.0);
  model.mutable_weight(1, 0) = 0.1 + 0.2;
  model.mutable_weight(2, 1) = 1e-300;
  model.mutable_weight(3, 2) = -123456.789012345678;
  model.mutable_training_set() = CourseExamples();
  const LinearModel back = DeserializeModel(SerializeModel(model));
  EXPECT_TRUE(BitEqual(back.weights(), model.weights()));
  EXPECT_TRUE(BitEqual(back.bias(), model.bias()));
  EXPECT_TRUE(back == model);
  EXPECT_EQ(SerializeModel(back), SerializeModel(model));
}

TEST(CheckpointTest, TrainedModelSurvivesFile) {
  TempDir dir;
  const LinearModel model =
      Train(CourseExamples(), CourseIntents(), Hyperparams::Bootstrap(), 5);
  SaveModel(dir / "m.ckpt", model);
  const LinearModel back = LoadModel(dir / "m.ckpt");
  EXPECT_TRUE(back == model);
  EXPECT_EQ(back.hyperparams(), model.hyperparams());
  EXPECT_EQ(back.seed(), 5u);
  EXPECT_EQ(back.vocabulary().tokens(), model.vocabulary().tokens());
}

TEST(CheckpointTest, MissingFileIsNotFound) {
  TempDir dir;
  try {
    LoadModel(dir / "nope.ckpt");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
    EXPECT_NE(std::string(e.what()).find("nope.ckpt"), std::string::npos);
  }
}

TEST(CheckpointTest, RejectsMalformedDocuments) {
  const LinearModel model = RandomModel(CourseIntents(), {"a"}, 1);
  Json doc = Json::parse(SerializeModel(model));
  EXPECT_THROW(DeserializeModel("not json"), Error);
  EXPECT_THROW(DeserializeModel("{}"), Error);

  Json wrong_version = doc;
  wrong_version["version"] = 99;
  EXPECT_THROW(DeserializeModel(wrong_version.dump()), Error);

  Json short_row = doc;
  short_row["weights"][1].erase(0);
  EXPECT_THROW(DeserializeModel(short_row.dump()), Error);

  Json no_sink = doc;
  no_sink["vocabulary"][0] = "x";
  EXPECT_THROW(DeserializeModel(no_sink.dump()), Error);
}

TEST(HyperparamsIoTest, LoadsGridAndSinglePoint) {
  TempDir dir;
  WriteFile(dir / "grid.json",
            R"([{"learning_rate":0.05,"epochs":3},{"l2":0.01,"replay_batch":0}])");
  const auto grid = LoadHyperparams(dir / "grid.json");
  ASSERT_EQ(grid.size(), 2u);
  EXPECT_EQ(grid[0].learning_rate, 0.05);
  EXPECT_EQ(grid[0].epochs, 3);
  EXPECT_EQ(grid[1].replay_batch, 0);
  EXPECT_EQ(grid[1].learning_rate, Hyperparams{}.learning_rate);

  WriteFile(dir / "one.json", R"({"epochs":30})");
  EXPECT_EQ(LoadHyperparams(dir / "one.json").size(), 1u);
  WriteFile(dir / "bad.json", R"({"epochs":0})");
  EXPECT_THROW(LoadHyperparams(dir / "bad.json"), Error);
}

TEST(HyperparamsIoTest, ShippedFilesLoad) {
  EXPECT_EQ(LoadHyperparams(::mt::testing::DataDir() / "hyperparams.json").size(),
            1u);
  EXPECT_GT(LoadHyperparams(::mt::testing::DataDir() / "grid.json").size(), 1u);
}

}  // namespace
}  // namespace mt
