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

#ifndef MT_KNOWLEDGE_H_
#define MT_KNOWLEDGE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mt/corpus.h"
#include "mt/masked_lm.h"

namespace mt {

inline constexpr int kMaxPhraseTokens = 3;
inline constexpr int kRecommendMaskedK = 5;

// Lowercases and re-tokenizes a phrase. Throws kInvalidArgument when the
// phrase is empty or longer than kMaxPhraseTokens.
std::string NormalizePhrase(std::string_view phrase);

// Synonyms and inflectional forms, merged from one JSONL file:
// {"word": text, "synonyms": [text], "forms": [text]}.
class SynonymLexicon {
 public:
  static SynonymLexicon Load(const std::filesystem::path& path);

  // Self-references and duplicates are dropped.
  void Add(std::string_view word, std::span<const std::string> synonyms,
           std::span<const std::string> forms);

  const std::vector<std::string>& Synonyms(std::string_view word) const;
  const std::vector<std::string>& Forms(std::string_view word) const;
  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::vector<std::string> synonyms;
    std::vector<std::string> forms;
  };
  std::map<std::string, Entry, std::less<>> entries_;
};

// Teacher-validated replacements, most recent first. With a log path every
// Record call is appended to {"word", "phrase", "ts"} JSONL before it
// returns, and the log is replayed on construction. Each line is one
// prepend, so a block [a, b] is logged as b then a.
class ValidatedStore {
 public:
  explicit ValidatedStore(std::optional<std::filesystem::path> log = {});

  // Prepends `accepted` (in order), dropping older copies. Throws
  // kInvalidArgument for empty input or a phrase equal to `word`, and kIo
  // when the log write fails (the in-memory update is kept).
  void Record(std::string_view word, std::span<const std::string> accepted);

  std::vector<std::string> Lookup(std::string_view word) const;
  std::map<std::string, std::vector<std::string>> Snapshot() const;

 private:
  void Prepend(const std::string& word, const std::string& phrase);

  std::optional<std::filesystem::path> log_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

enum class RecommendationSource { kValidated, kLexicon, kMaskedLm };

std::string_view SourceName(RecommendationSource source);

struct ReplacementRecommendation {
  std::string phrase;
  RecommendationSource source = RecommendationSource::kLexicon;

  bool operator==(const ReplacementRecommendation&) const = default;
};

class KnowledgeBase {
 public:
  KnowledgeBase(std::shared_ptr<const SynonymLexicon> lexicon,
                std::shared_ptr<ValidatedStore> store,
                std::shared_ptr<const MaskedLm> masked_lm);

  // Opens a KB directory: lexicon.jsonl (optional) and validated.jsonl
  // (created on first write). The masked LM is built over `corpus`.
  static KnowledgeBase Open(const std::filesystem::path& dir,
                            std::span<const Sentence> corpus);

  // Validated entries first, then lexicon synonyms and word forms, then
  // masked-LM suggestions for `position` in `context`. Deduplicated, the
  // earliest source winning.
  std::vector<ReplacementRecommendation> Recommend(
      std::string_view word, const Sentence& context, int position,
      int masked_k = kRecommendMaskedK) const;

  void RecordValidated(std::string_view word,
                       std::span<const std::string> accepted);

  // Forms from the lexicon, never the word itself.
  std::vector<std::string> WordForms(std::string_view word) const;

  const SynonymLexicon& lexicon() const { return *lexicon_; }
  const MaskedLm& masked_lm() const { return *masked_lm_; }
  const ValidatedStore& store() const { return *store_; }

 private:
  std::shared_ptr<const SynonymLexicon> lexicon_;
  std::shared_ptr<ValidatedStore> store_;
  std::shared_ptr<const MaskedLm> masked_lm_;
};

}  // namespace mt

#endif  // MT_KNOWLEDGE_H_
