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

#ifndef MT_CHECKPOINT_H_
#define MT_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "mt/jsonl.h"
#include "mt/learner.h"

namespace mt {

inline constexpr int kCheckpointVersion = 1;

// JSON checkpoint: format tag, version, intents, vocabulary, feature-major
// weights, bias, hyperparams, seed and the cumulative training set. Doubles
// are written in shortest round-trip form, so Serialize(Load(Serialize(m)))
// is byte-identical to Serialize(m).
std::string SerializeModel(const LinearModel& model);
LinearModel DeserializeModel(const std::string& text);

void SaveModel(const std::filesystem::path& path, const LinearModel& model);
LinearModel LoadModel(const std::filesystem::path& path);

Json HyperparamsToJson(const Hyperparams& hp);
Hyperparams HyperparamsFromJson(const Json& record);

// A hyperparameter file holds either one object or an array of objects.
std::vector<Hyperparams> LoadHyperparams(const std::filesystem::path& path);

}  // namespace mt

#endif  // MT_CHECKPOINT_H_
