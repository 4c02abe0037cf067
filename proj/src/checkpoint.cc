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

#include "mt/checkpoint.h"

#include <cmath>

#include "mt/error.h"

namespace mt {

namespace {
constexpr char kFormat[] = "mt-linear-model";
}  // namespace

Json HyperparamsToJson(const Hyperparams& hp) {
  return {{"learning_rate", hp.learning_rate},
          {"epochs", hp.epochs},
          {"l2", hp.l2},
          {"replay_batch", hp.replay_batch}};
}

Hyperparams HyperparamsFromJson(const Json& record) {
  Hyperparams hp;
  try {
    hp.learning_rate = record.value("learning_rate", hp.learning_rate);
    hp.epochs = record.value("epochs", hp.epochs);
    hp.l2 = record.value("l2", hp.l2);
    hp.replay_batch = record.value("replay_batch", hp.replay_batch);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad hyperparams: ") + e.what());
  }
  hp.Validate();
  return hp;
}

std::vector<Hyperparams> LoadHyperparams(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(ReadFile(path));
  } catch (const Json::parse_error& e) {
    Fail(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  std::vector<Hyperparams> out;
  if (doc.is_array()) {
    for (const Json& item : doc) out.push_back(HyperparamsFromJson(item));
  } else {
    out.push_back(HyperparamsFromJson(doc));
  }
  return out;
}

std::string SerializeModel(const LinearModel& model) {
  const int k = model.num_intents();
  Json weights = Json::array();
  for (int f = 0; f < model.vocabulary().size(); ++f) {
    Json row = Json::array();
    for (int c = 0; c < k; ++c) row.push_back(model.weight(f, c));
    weights.push_back(std::move(row));
  }
  Json training = Json::array();
  for (const LabeledExample& example : model.training_set()) {
    training.push_back(ExampleToJson(example, model.inventory()));
  }
  Json doc = {{"format", kFormat},
              {"version", kCheckpointVersion},
              {"intents", model.inventory().names()},
              {"vocabulary", model.vocabulary().tokens()},
              {"frozen", model.vocabulary().frozen()},
              {"weights", std::move(weights)},
              {"bias", model.bias()},
              {"hyperparams", HyperparamsToJson(model.hyperparams())},
              {"seed", model.seed()},
              {"training_set", std::move(training)}};
  return doc.dump() + "\n";
}

LinearModel DeserializeModel(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format") != kFormat) {
      Fail(ErrorCode::kInvalidArgument, "not a model checkpoint");
    }
    if (doc.at("version").get<int>() != kCheckpointVersion) {
      Fail(ErrorCode::kInvalidArgument,
           "unsupported checkpoint version " + doc["version"].dump());
    }
    IntentInventory inventory(doc.at("intents").get<std::vector<std::string>>());
    LinearModel model(inventory, HyperparamsFromJson(doc.at("hyperparams")),
                      doc.at("seed").get<uint64_t>());
    const auto tokens = doc.at("vocabulary").get<std::vector<std::string>>();
    if (tokens.empty() || !tokens[0].empty()) {
      Fail(ErrorCode::kInvalidArgument, "vocabulary must start with the sink");
    }
    for (size_t i = 1; i < tokens.size(); ++i) {
      if (model.mutable_vocabulary().Intern(tokens[i]) != static_cast<int>(i)) {
        Fail(ErrorCode::kInvalidArgument, "duplicate vocabulary token " + tokens[i]);
      }
    }
    model.mutable_vocabulary().set_frozen(doc.at("frozen").get<bool>());
    model.SyncWeightRows();
    const Json& weights = doc.at("weights");
    if (weights.size() != tokens.size()) {
      Fail(ErrorCode::kInvalidArgument, "weight rows do not match vocabulary");
    }
    const int k = inventory.size();
    for (size_t f = 0; f < weights.size(); ++f) {
      if (static_cast<int>(weights[f].size()) != k) {
        Fail(ErrorCode::kInvalidArgument, "weight row has wrong width");
      }
      for (int c = 0; c < k; ++c) {
        const double w = weights[f][c].get<double>();
        if (!std::isfinite(w)) Fail(ErrorCode::kInvalidArgument, "non-finite weight");
        model.mutable_weight(static_cast<int>(f), c) = w;
      }
    }
    auto bias = doc.at("bias").get<std::vector<double>>();
    if (static_cast<int>(bias.size()) != k) {
      Fail(ErrorCode::kInvalidArgument, "bias has wrong width");
    }
    model.mutable_bias() = std::move(bias);
    for (const Json& record : doc.at("training_set")) {
      model.mutable_training_set().push_back(ExampleFromJson(record, inventory));
    }
    return model;
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad checkpoint: ") + e.what());
  }
}

void SaveModel(const std::filesystem::path& path, const LinearModel& model) {
  WriteFile(path, SerializeModel(model));
}

LinearModel LoadModel(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    Fail(ErrorCode::kNotFound, "checkpoint not found: " + path.string());
  }
  return DeserializeModel(ReadFile(path));
}

}  // namespace mt
