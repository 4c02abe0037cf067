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

#ifndef MT_CORPUS_H_
#define MT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mt/jsonl.h"

namespace mt {

// A tokenized utterance. `tokens` is always Tokenize(raw).tokens for
// sentences built by Tokenize; sentences built from tokens carry the
// space-joined form as raw.
struct Sentence {
  std::vector<std::string> tokens;
  std::string raw;

  size_t size() const { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

// Lowercases ASCII letters and splits on anything that is not a letter,
// digit, apostrophe or hyphen. Apostrophes and hyphens survive only inside a
// token. Bytes >= 0x80 are treated as letters so UTF-8 words pass through
// untouched. Throws kInvalidArgument when no token survives.
Sentence Tokenize(std::string_view raw);

// Builds a sentence from already-tokenized words.
Sentence SentenceFromTokens(std::vector<std::string> tokens);

std::string JoinTokens(std::span<const std::string> tokens);

struct IntentLabel {
  int id = 0;
  std::string name;

  bool operator==(const IntentLabel&) const = default;
};

class IntentInventory {
 public:
  IntentInventory() = default;
  // Ids are assigned in list order. Throws on duplicate or empty names.
  explicit IntentInventory(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int id) const;
  IntentLabel label(int id) const { return {id, name(id)}; }
  std::optional<int> Find(std::string_view name) const;
  // Like Find but throws kInvalidArgument for unknown names.
  int IdOf(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const IntentInventory&) const = default;

 private:
  std::vector<std::string> names_;
};

enum class Origin { kTemplate, kManual, kAugmented };

std::string_view OriginName(Origin origin);
Origin ParseOrigin(std::string_view name);

// Where an augmented example came from.
struct Provenance {
  std::string source_id;
  int position = 0;
  std::string phrase;
  std::string tag;

  bool operator==(const Provenance&) const = default;
};

struct LabeledExample {
  std::string id;
  Sentence sentence;
  int label = 0;
  Origin origin = Origin::kTemplate;
  std::optional<Provenance> provenance;

  bool operator==(const LabeledExample&) const = default;
};

struct Template {
  std::string id;
  std::string intent;
  std::string pattern;
  std::vector<std::string> keywords;
  std::map<std::string, std::vector<std::string>> entities;
};

// Placeholder names in order of first appearance.
std::vector<std::string> Placeholders(std::string_view pattern);

// Throws kInvalidArgument when a placeholder lacks entities or a keyword is
// missing from the pattern's fixed text.
void ValidateTemplate(const Template& t);

// One example per element of the cross product of the placeholder entity
// lists, leftmost placeholder varying slowest. Example ids are
// "<template id>.<index>".
std::vector<LabeledExample> ExpandTemplate(const Template& t,
                                           const IntentInventory& inventory);

// Source template id encoded in an example id, or nullopt for ids that were
// not produced by ExpandTemplate.
std::optional<std::string> TemplateIdOf(std::string_view example_id);

struct DatasetSplit {
  std::vector<LabeledExample> bootstrap;
  std::vector<LabeledExample> novel_pool;
  std::vector<LabeledExample> test;
  std::vector<std::string> bootstrap_templates;
  std::vector<std::string> novel_templates;
};

// Number of bootstrap templates for an intent owning `count` templates:
// round-to-nearest of count * fraction, then clamped so each side keeps at
// least one template whenever count >= 2.
int BootstrapTemplateCount(int count, double fraction);

// Partitions templates per intent at the template level and expands each
// side. `test` is left empty.
DatasetSplit SplitDataset(std::span<const Template> templates,
                          const IntentInventory& inventory, double fraction,
                          uint64_t seed);

// Intent names in order of first appearance.
IntentInventory InventoryFromTemplates(std::span<const Template> templates);

// Templates JSONL. Ids are assigned from the line order as "t000", "t001"...
// (with a different letter prefix when given).
std::vector<Template> LoadTemplates(const std::filesystem::path& path,
                                    std::string_view id_prefix = "t");

// Dataset record: {"id", "text", "label", "origin"} plus "provenance" for
// augmented examples.
Json ExampleToJson(const LabeledExample& example,
                   const IntentInventory& inventory);
LabeledExample ExampleFromJson(const Json& record,
                               const IntentInventory& inventory);

std::vector<LabeledExample> LoadDataset(const std::filesystem::path& path,
                                        const IntentInventory& inventory);
void SaveDataset(const std::filesystem::path& path,
                 std::span<const LabeledExample> examples,
                 const IntentInventory& inventory);

// Deterministic seeded sample of `n` examples (all of them when n >= size),
// returned in their original relative order.
std::vector<LabeledExample> SampleExamples(std::span<const LabeledExample> examples,
                                           size_t n, uint64_t seed);

}  // namespace mt

#endif  // MT_CORPUS_H_
