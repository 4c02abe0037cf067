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

#include "mt/knowledge.h"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <set>

#include "mt/error.h"
#include "mt/jsonl.h"

namespace mt {
namespace {

const std::vector<std::string> kEmpty;

void AppendUnique(std::vector<std::string>& list, const std::string& item) {
  if (std::find(list.begin(), list.end(), item) == list.end()) {
    list.push_back(item);
  }
}

int64_t NowSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string NormalizePhrase(std::string_view phrase) {
  Sentence s = Tokenize(phrase);
  if (s.size() > static_cast<size_t>(kMaxPhraseTokens)) {
    Fail(ErrorCode::kInvalidArgument,
         "phrase longer than " + std::to_string(kMaxPhraseTokens) +
             " tokens: " + std::string(phrase));
  }
  return JoinTokens(s.tokens);
}

SynonymLexicon SynonymLexicon::Load(const std::filesystem::path& path) {
  SynonymLexicon lexicon;
  for (const Json& record : ReadJsonl(path)) {
    try {
      lexicon.Add(record.at("word").get<std::string>(),
                  record.value("synonyms", std::vector<std::string>{}),
                  record.value("forms", std::vector<std::string>{}));
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kInvalidArgument,
           path.string() + ": bad lexicon entry: " + e.what());
    }
  }
  return lexicon;
}

void SynonymLexicon::Add(std::string_view word,
                         std::span<const std::string> synonyms,
                         std::span<const std::string> forms) {
  const std::string key = NormalizePhrase(word);
  Entry& entry = entries_[key];
  for (const std::string& phrase : synonyms) {
    std::string p = NormalizePhrase(phrase);
    if (p != key) AppendUnique(entry.synonyms, p);
  }
  for (const std::string& phrase : forms) {
    std::string p = NormalizePhrase(phrase);
    if (p != key) AppendUnique(entry.forms, p);
  }
}

const std::vector<std::string>& SynonymLexicon::Synonyms(
    std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? kEmpty : it->second.synonyms;
}

const std::vector<std::string>& SynonymLexicon::Forms(
    std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? kEmpty : it->second.forms;
}

ValidatedStore::ValidatedStore(std::optional<std::filesystem::path> log)
    : log_(std::move(log)) {
  if (!log_ || !std::filesystem::exists(*log_)) return;
  for (const Json& record : ReadJsonl(*log_)) {
    try {
      Prepend(record.at("word").get<std::string>(),
              record.at("phrase").get<std::string>());
    } catch (const Json::exception& e) {
      Fail(ErrorCode::kInvalidArgument,
           log_->string() + ": bad validated entry: " + e.what());
    }
  }
}

void ValidatedStore::Prepend(const std::string& word,
                             const std::string& phrase) {
  std::vector<std::string>& list = entries_[word];
  std::erase(list, phrase);
  list.insert(list.begin(), phrase);
}

void ValidatedStore::Record(std::string_view word,
                            std::span<const std::string> accepted) {
  if (accepted.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no validated phrases to record");
  }
  const std::string key = NormalizePhrase(word);
  std::vector<std::string> phrases;
  for (const std::string& phrase : accepted) {
    std::string p = NormalizePhrase(phrase);
    if (p == key) {
      Fail(ErrorCode::kInvalidArgument,
           "validated phrase equals the word itself: " + p);
    }
    phrases.push_back(std::move(p));
  }

  std::unique_lock lock(mutex_);
  for (auto it = phrases.rbegin(); it != phrases.rend(); ++it) {
    Prepend(key, *it);
  }
  if (!log_) return;
  const int64_t ts = NowSeconds();
  for (auto it = phrases.rbegin(); it != phrases.rend(); ++it) {
    AppendJsonl(*log_, {{"word", key}, {"phrase", *it}, {"ts", ts}});
  }
}

std::vector<std::string> ValidatedStore::Lookup(std::string_view word) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(word);
  return it == entries_.end() ? std::vector<std::string>{} : it->second;
}

std::map<std::string, std::vector<std::string>> ValidatedStore::Snapshot()
    const {
  std::shared_lock lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

std::string_view SourceName(RecommendationSource source) {
  switch (source) {
    case RecommendationSource::kValidated:
      return "validated";
    case RecommendationSource::kLexicon:
      return "lexicon";
    case RecommendationSource::kMaskedLm:
      return "masked_lm";
  }
  return "lexicon";
}

KnowledgeBase::KnowledgeBase(std::shared_ptr<const SynonymLexicon> lexicon,
                             std::shared_ptr<ValidatedStore> store,
                             std::shared_ptr<const MaskedLm> masked_lm)
    : lexicon_(std::move(lexicon)),
      store_(std::move(store)),
      masked_lm_(std::move(masked_lm)) {
  if (!lexicon_) lexicon_ = std::make_shared<const SynonymLexicon>();
  if (!store_) store_ = std::make_shared<ValidatedStore>();
  if (!masked_lm_) masked_lm_ = std::make_shared<const CorpusMaskedLm>(
                       std::span<const Sentence>{});
}

KnowledgeBase KnowledgeBase::Open(const std::filesystem::path& dir,
                                  std::span<const Sentence> corpus) {
  if (!std::filesystem::is_directory(dir)) {
    Fail(ErrorCode::kNotFound, "knowledge base directory not found: " +
                                   dir.string());
  }
  auto lexicon = std::make_shared<SynonymLexicon>();
  if (std::filesystem::exists(dir / "lexicon.jsonl")) {
    *lexicon = SynonymLexicon::Load(dir / "lexicon.jsonl");
  }
  return KnowledgeBase(std::move(lexicon),
                       std::make_shared<ValidatedStore>(dir / "validated.jsonl"),
                       MakeMaskedLm(corpus));
}

std::vector<ReplacementRecommendation> KnowledgeBase::Recommend(
    std::string_view word, const Sentence& context, int position,
    int masked_k) const {
  if (position < 0 || position >= static_cast<int>(context.size()) ||
      context.tokens[position] != word) {
    Fail(ErrorCode::kInvalidArgument, "position does not address '" +
                                          std::string(word) +
                                          "' in the context sentence");
  }
  std::vector<ReplacementRecommendation> out;
  std::set<std::string> seen{std::string(word)};
  auto add = [&](const std::string& phrase, RecommendationSource source) {
    if (seen.insert(phrase).second) out.push_back({phrase, source});
  };
  for (const std::string& phrase : store_->Lookup(word)) {
    add(phrase, RecommendationSource::kValidated);
  }
  for (const std::string& phrase : lexicon_->Synonyms(word)) {
    add(phrase, RecommendationSource::kLexicon);
  }
  for (const std::string& phrase : lexicon_->Forms(word)) {
    add(phrase, RecommendationSource::kLexicon);
  }
  if (masked_k > 0) {
    for (const WordScore& candidate :
         masked_lm_->TopK(MaskedLmQuery::Mask(context, position, masked_k))) {
      add(candidate.word, RecommendationSource::kMaskedLm);
    }
  }
  return out;
}

void KnowledgeBase::RecordValidated(std::string_view word,
                                    std::span<const std::string> accepted) {
  store_->Record(word, accepted);
}

std::vector<std::string> KnowledgeBase::WordForms(std::string_view word) const {
  return lexicon_->Forms(word);
}

}  // namespace mt
