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

#include "mt/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "mt/error.h"
#include "mt/random.h"

namespace mt {
namespace {

bool IsWordByte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

bool IsJoiner(unsigned char c) { return c == '\'' || c == '-'; }

void FlushToken(std::string& current, std::vector<std::string>& out) {
  // Joiners are only kept between word characters.
  size_t begin = 0;
  size_t end = current.size();
  while (begin < end && IsJoiner(current[begin])) ++begin;
  while (end > begin && IsJoiner(current[end - 1])) --end;
  if (end > begin) out.push_back(current.substr(begin, end - begin));
  current.clear();
}

std::string FormatTemplateId(std::string_view prefix, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03zu", index);
  return std::string(prefix) + buf;
}

std::string FormatExampleId(const std::string& template_id, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), ".%04zu", index);
  return template_id + buf;
}

// Splits a pattern into alternating fixed text and placeholder names.
struct PatternPiece {
  bool placeholder;
  std::string text;
};

std::vector<PatternPiece> ParsePattern(std::string_view pattern) {
  std::vector<PatternPiece> pieces;
  std::string fixed;
  size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      size_t close = pattern.find('}', i);
      if (close == std::string_view::npos) {
        Fail(ErrorCode::kInvalidArgument,
             "unterminated placeholder in pattern: " + std::string(pattern));
      }
      std::string name(pattern.substr(i + 1, close - i - 1));
      if (name.empty()) {
        Fail(ErrorCode::kInvalidArgument,
             "empty placeholder in pattern: " + std::string(pattern));
      }
      if (!fixed.empty()) pieces.push_back({false, std::move(fixed)});
      fixed.clear();
      pieces.push_back({true, std::move(name)});
      i = close + 1;
    } else {
      fixed.push_back(pattern[i++]);
    }
  }
  if (!fixed.empty()) pieces.push_back({false, std::move(fixed)});
  return pieces;
}

}  // namespace

Sentence Tokenize(std::string_view raw) {
  Sentence sentence;
  sentence.raw = std::string(raw);
  std::string current;
  for (unsigned char c : raw) {
    if (IsWordByte(c) || IsJoiner(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      FlushToken(current, sentence.tokens);
    }
  }
  FlushToken(current, sentence.tokens);
  if (sentence.tokens.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "no tokens in input: \"" + std::string(raw) + "\"");
  }
  return sentence;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Sentence SentenceFromTokens(std::vector<std::string> tokens) {
  if (tokens.empty()) Fail(ErrorCode::kInvalidArgument, "empty sentence");
  Sentence sentence;
  sentence.raw = JoinTokens(tokens);
  sentence.tokens = std::move(tokens);
  return sentence;
}

IntentInventory::IntentInventory(std::vector<std::string> names)
    : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const std::string& name : names_) {
    if (name.empty()) Fail(ErrorCode::kInvalidArgument, "empty intent name");
    if (!seen.insert(name).second) {
      Fail(ErrorCode::kInvalidArgument, "duplicate intent name: " + name);
    }
  }
}

const std::string& IntentInventory::name(int id) const {
  if (id < 0 || id >= size()) {
    Fail(ErrorCode::kOutOfRange, "intent id out of range: " + std::to_string(id));
  }
  return names_[id];
}

std::optional<int> IntentInventory::Find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

int IntentInventory::IdOf(std::string_view name) const {
  auto id = Find(name);
  if (!id) Fail(ErrorCode::kInvalidArgument, "unknown intent: " + std::string(name));
  return *id;
}

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kTemplate:
      return "template";
    case Origin::kManual:
      return "manual";
    case Origin::kAugmented:
      return "augmented";
  }
  return "template";
}

Origin ParseOrigin(std::string_view name) {
  if (name == "template") return Origin::kTemplate;
  if (name == "manual") return Origin::kManual;
  if (name == "augmented") return Origin::kAugmented;
  Fail(ErrorCode::kInvalidArgument, "unknown origin: " + std::string(name));
}

std::vector<std::string> Placeholders(std::string_view pattern) {
  std::vector<std::string> names;
  for (const PatternPiece& piece : ParsePattern(pattern)) {
    if (piece.placeholder &&
        std::find(names.begin(), names.end(), piece.text) == names.end()) {
      names.push_back(piece.text);
    }
  }
  return names;
}

void ValidateTemplate(const Template& t) {
  if (t.intent.empty()) {
    Fail(ErrorCode::kInvalidArgument, "template " + t.id + " has no intent");
  }
  std::vector<std::string> fixed_tokens;
  for (const PatternPiece& piece : ParsePattern(t.pattern)) {
    if (piece.placeholder) {
      auto it = t.entities.find(piece.text);
      if (it == t.entities.end() || it->second.empty()) {
        Fail(ErrorCode::kInvalidArgument, "template " + t.id +
                                              ": no entities for {" +
                                              piece.text + "}");
      }
    } else if (piece.text.find_first_not_of(" \t") != std::string::npos) {
      try {
        for (auto& token : Tokenize(piece.text).tokens) {
          fixed_tokens.push_back(std::move(token));
        }
      } catch (const Error&) {
        // Punctuation-only fragment.
      }
    }
  }
  for (const std::string& keyword : t.keywords) {
    if (std::find(fixed_tokens.begin(), fixed_tokens.end(), keyword) ==
        fixed_tokens.end()) {
      Fail(ErrorCode::kInvalidArgument, "template " + t.id + ": keyword '" +
                                            keyword +
                                            "' not in fixed pattern text");
    }
  }
}

std::vector<LabeledExample> ExpandTemplate(const Template& t,
                                           const IntentInventory& inventory) {
  const std::vector<PatternPiece> pieces = ParsePattern(t.pattern);
  const std::vector<std::string> slots = Placeholders(t.pattern);
  std::vector<const std::vector<std::string>*> lists;
  for (const std::string& slot : slots) {
    auto it = t.entities.find(slot);
    if (it == t.entities.end() || it->second.empty()) {
      Fail(ErrorCode::kInvalidArgument,
           "template " + t.id + ": no entities for {" + slot + "}");
    }
    lists.push_back(&it->second);
  }
  const int label = inventory.IdOf(t.intent);

  std::vector<size_t> choice(slots.size(), 0);
  std::vector<LabeledExample> out;
  while (true) {
    std::string text;
    for (const PatternPiece& piece : pieces) {
      if (!piece.placeholder) {
        text += piece.text;
        continue;
      }
      size_t slot = std::find(slots.begin(), slots.end(), piece.text) -
                    slots.begin();
      text += (*lists[slot])[choice[slot]];
    }
    LabeledExample example;
    example.id = FormatExampleId(t.id, out.size());
    example.sentence = Tokenize(text);
    example.label = label;
    example.origin = Origin::kTemplate;
    out.push_back(std::move(example));

    // Odometer increment: the rightmost slot varies fastest.
    int slot = static_cast<int>(slots.size()) - 1;
    while (slot >= 0) {
      if (++choice[slot] < lists[slot]->size()) break;
      choice[slot] = 0;
      --slot;
    }
    if (slot < 0) break;
  }
  return out;
}

std::optional<std::string> TemplateIdOf(std::string_view example_id) {
  // <letters><digits>.<digits>
  size_t i = 0;
  while (i < example_id.size() &&
         std::islower(static_cast<unsigned char>(example_id[i]))) {
    ++i;
  }
  const size_t letters = i;
  while (i < example_id.size() &&
         std::isdigit(static_cast<unsigned char>(example_id[i]))) {
    ++i;
  }
  if (letters == 0 || i == letters || i >= example_id.size() ||
      example_id[i] != '.') {
    return std::nullopt;
  }
  const size_t dot = i++;
  if (i == example_id.size()) return std::nullopt;
  for (; i < example_id.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(example_id[i]))) {
      return std::nullopt;
    }
  }
  return std::string(example_id.substr(0, dot));
}

int BootstrapTemplateCount(int count, double fraction) {
  int k = static_cast<int>(std::lround(count * fraction));
  if (count >= 2) k = std::clamp(k, 1, count - 1);
  else k = count;
  return k;
}

DatasetSplit SplitDataset(std::span<const Template> templates,
                          const IntentInventory& inventory, double fraction,
                          uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "bootstrap fraction must be in (0, 1)");
  }
  std::vector<std::vector<size_t>> by_intent(inventory.size());
  for (size_t i = 0; i < templates.size(); ++i) {
    by_intent[inventory.IdOf(templates[i].intent)].push_back(i);
  }
  std::vector<bool> in_bootstrap(templates.size(), false);
  for (int intent = 0; intent < inventory.size(); ++intent) {
    std::vector<size_t>& members = by_intent[intent];
    const int k = BootstrapTemplateCount(static_cast<int>(members.size()),
                                         fraction);
    if (k == 0) {
      Fail(ErrorCode::kInvalidArgument,
           "intent '" + inventory.name(intent) +
               "' has no template in the bootstrap partition");
    }
    Rng rng = MakeRng(seed, {static_cast<uint64_t>(intent)});
    std::shuffle(members.begin(), members.end(), rng);
    for (int j = 0; j < k; ++j) in_bootstrap[members[j]] = true;
  }

  DatasetSplit split;
  for (size_t i = 0; i < templates.size(); ++i) {
    auto examples = ExpandTemplate(templates[i], inventory);
    auto& target = in_bootstrap[i] ? split.bootstrap : split.novel_pool;
    (in_bootstrap[i] ? split.bootstrap_templates : split.novel_templates)
        .push_back(templates[i].id);
    std::move(examples.begin(), examples.end(), std::back_inserter(target));
  }
  return split;
}

IntentInventory InventoryFromTemplates(std::span<const Template> templates) {
  std::vector<std::string> names;
  for (const Template& t : templates) {
    if (std::find(names.begin(), names.end(), t.intent) == names.end()) {
      names.push_back(t.intent);
    }
  }
  return IntentInventory(std::move(names));
}

std::vector<Template> LoadTemplates(const std::filesystem::path& path,
                                    std::string_view id_prefix) {
  std::vector<Template> templates;
  for (const Json& record : ReadJsonl(path)) {
    Template t;
    t.id = FormatTemplateId(id_prefix, templates.size());
    try {
      t.intent = record.at("intent").get<std::string>();
      t.pattern = record.at("pattern").get<std::string>();
      t.keywords = record.value("keywords", std::vector<std::string>{});
      t.entities = record.value(
          "entities", std::map<std::string, std::vector<std::string>>{});
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kInvalidArgument,
           path.string() + ": template " + t.id + ": " + e.what());
    }
    ValidateTemplate(t);
    templates.push_back(std::move(t));
  }
  return templates;
}

Json ExampleToJson(const LabeledExample& example,
                   const IntentInventory& inventory) {
  Json record = {{"id", example.id},
                 {"text", example.sentence.raw},
                 {"label", inventory.name(example.label)},
                 {"origin", std::string(OriginName(example.origin))}};
  if (example.provenance) {
    record["provenance"] = {{"source_id", example.provenance->source_id},
                            {"position", example.provenance->position},
                            {"phrase", example.provenance->phrase},
                            {"tag", example.provenance->tag}};
  }
  return record;
}

LabeledExample ExampleFromJson(const Json& record,
                               const IntentInventory& inventory) {
  LabeledExample example;
  try {
    example.id = record.at("id").get<std::string>();
    example.sentence = Tokenize(record.at("text").get<std::string>());
    example.label = inventory.IdOf(record.at("label").get<std::string>());
    example.origin = ParseOrigin(record.value("origin", "template"));
    if (record.contains("provenance")) {
      const Json& p = record["provenance"];
      example.provenance = Provenance{p.at("source_id").get<std::string>(),
                                      p.at("position").get<int>(),
                                      p.at("phrase").get<std::string>(),
                                      p.at("tag").get<std::string>()};
    }
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad example record: ") + e.what());
  }
  return example;
}

std::vector<LabeledExample> LoadDataset(const std::filesystem::path& path,
                                        const IntentInventory& inventory) {
  std::vector<LabeledExample> examples;
  std::set<std::string> ids;
  for (const Json& record : ReadJsonl(path)) {
    examples.push_back(ExampleFromJson(record, inventory));
    if (!ids.insert(examples.back().id).second) {
      Fail(ErrorCode::kInvalidArgument,
           path.string() + ": duplicate example id " + examples.back().id);
    }
  }
  return examples;
}

void SaveDataset(const std::filesystem::path& path,
                 std::span<const LabeledExample> examples,
                 const IntentInventory& inventory) {
  std::vector<Json> records;
  records.reserve(examples.size());
  for (const LabeledExample& example : examples) {
    records.push_back(ExampleToJson(example, inventory));
  }
  WriteJsonl(path, records);
}

std::vector<LabeledExample> SampleExamples(
    std::span<const LabeledExample> examples, size_t n, uint64_t seed) {
  if (n >= examples.size()) return {examples.begin(), examples.end()};
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeRng(seed, {0x5a3b1eULL});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(n);
  std::sort(order.begin(), order.end());
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (size_t i : order) out.push_back(examples[i]);
  return out;
}

}  // namespace mt
