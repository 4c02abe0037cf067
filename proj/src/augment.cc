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

#include "mt/augment.h"

#include <algorithm>

#include "mt/error.h"
#include "mt/random.h"

namespace mt {

void FeedbackRecord::Validate(size_t sentence_length, int num_intents) const {
  if (label < 0 || label >= num_intents) {
    Fail(ErrorCode::kInvalidArgument, "feedback label outside the inventory");
  }
  ValidateAnnotations(sentence_length);
}

void FeedbackRecord::ValidateAnnotations(size_t sentence_length) const {
  if (action == FeedbackAction::kSkip && HasAnnotations()) {
    Fail(ErrorCode::kInvalidArgument, "skip feedback cannot carry annotations");
  }
  auto check_range = [&](int position) {
    if (position < 0 || static_cast<size_t>(position) >= sentence_length) {
      Fail(ErrorCode::kInvalidArgument,
           "feedback position " + std::to_string(position) + " out of range");
    }
  };
  for (int p : important) check_range(p);
  for (int p : inconsequential) {
    check_range(p);
    if (important.count(p)) {
      Fail(ErrorCode::kInvalidArgument,
           "position " + std::to_string(p) +
               " marked both important and inconsequential");
    }
  }
  for (const auto& [p, phrases] : validated) {
    if (!important.count(p)) {
      Fail(ErrorCode::kInvalidArgument,
           "validated replacements for non-important position " +
               std::to_string(p));
    }
    for (const std::string& phrase : phrases) NormalizePhrase(phrase);
  }
  if (sim_seconds < 0.0) {
    Fail(ErrorCode::kInvalidArgument, "negative sim_seconds");
  }
}

Json FeedbackToJson(const FeedbackRecord& fb,
                    const IntentInventory& inventory) {
  Json validated = Json::object();
  for (const auto& [p, phrases] : fb.validated) {
    validated[std::to_string(p)] = phrases;
  }
  return {{"example_id", fb.example_id},
          {"label", inventory.name(fb.label)},
          {"important", std::vector<int>(fb.important.begin(), fb.important.end())},
          {"inconsequential",
           std::vector<int>(fb.inconsequential.begin(), fb.inconsequential.end())},
          {"validated", std::move(validated)},
          {"action", fb.action == FeedbackAction::kAccept ? "accept" : "skip"},
          {"sim_seconds", fb.sim_seconds}};
}

FeedbackRecord FeedbackFromJson(const Json& record,
                                const IntentInventory& inventory) {
  FeedbackRecord fb;
  try {
    fb.example_id = record.at("example_id").get<std::string>();
    fb.label = inventory.IdOf(record.at("label").get<std::string>());
    for (int p : record.value("important", std::vector<int>{})) {
      fb.important.insert(p);
    }
    for (int p : record.value("inconsequential", std::vector<int>{})) {
      fb.inconsequential.insert(p);
    }
    if (record.contains("validated")) {
      for (const auto& [key, phrases] : record["validated"].items()) {
        size_t used = 0;
        const int p = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        fb.validated[p] = phrases.get<std::vector<std::string>>();
      }
    }
    const std::string action = record.value("action", "accept");
    if (action == "accept") {
      fb.action = FeedbackAction::kAccept;
    } else if (action == "skip") {
      fb.action = FeedbackAction::kSkip;
    } else {
      Fail(ErrorCode::kInvalidArgument, "unknown feedback action: " + action);
    }
    fb.sim_seconds = record.value("sim_seconds", 0.0);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad feedback: ") + e.what());
  } catch (const std::invalid_argument& e) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("bad validated position: ") + e.what());
  } catch (const std::out_of_range& e) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("bad validated position: ") + e.what());
  }
  return fb;
}

LabeledExample Variation::ToExample(size_t index) const {
  LabeledExample example;
  example.id = provenance.source_id + "~v" + std::to_string(index);
  example.sentence = sentence;
  example.label = label;
  example.origin = Origin::kAugmented;
  example.provenance = provenance;
  return example;
}

std::vector<LabeledExample> VariationsToExamples(
    const std::vector<Variation>& variations) {
  std::vector<LabeledExample> out;
  out.reserve(variations.size());
  for (size_t i = 0; i < variations.size(); ++i) {
    out.push_back(variations[i].ToExample(i));
  }
  return out;
}

std::vector<std::string> SpliceTokens(
    const std::vector<std::string>& tokens, size_t position,
    const std::vector<std::string>& phrase_tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.begin() + position);
  out.insert(out.end(), phrase_tokens.begin(), phrase_tokens.end());
  out.insert(out.end(), tokens.begin() + position + 1, tokens.end());
  return out;
}

namespace {

struct Site {
  int position;
  std::vector<std::string> phrases;
  std::string tag;
};

std::vector<Site> CollectSites(const Sentence& source,
                               const FeedbackRecord& fb,
                               const MaskedLm& masked_lm,
                               const VariationOptions& options) {
  std::vector<Site> sites;
  for (int p = 0; p < static_cast<int>(source.size()); ++p) {
    Site site{p, {}, ""};
    if (fb.important.count(p)) {
      site.tag = "validated";
      if (auto it = fb.validated.find(p); it != fb.validated.end()) {
        for (const std::string& phrase : it->second) {
          site.phrases.push_back(NormalizePhrase(phrase));
        }
      }
    } else if (fb.inconsequential.count(p) && options.inconsequential_k > 0) {
      site.tag = "masked_lm";
      for (const WordScore& candidate : masked_lm.TopK(
               MaskedLmQuery::Mask(source, p, options.inconsequential_k))) {
        site.phrases.push_back(candidate.word);
      }
    }
    if (!site.phrases.empty()) sites.push_back(std::move(site));
  }
  return sites;
}

std::vector<std::string> PhraseTokens(const std::string& phrase) {
  return Tokenize(phrase).tokens;
}

}  // namespace

std::vector<Variation> GenerateVariations(const LabeledExample& source,
                                          const FeedbackRecord& fb,
                                          const MaskedLm& masked_lm,
                                          const VariationOptions& options) {
  if (fb.action != FeedbackAction::kAccept) return {};
  fb.ValidateAnnotations(source.sentence.size());
  const std::vector<Site> sites =
      CollectSites(source.sentence, fb, masked_lm, options);

  std::vector<Variation> out;
  std::set<std::vector<std::string>> seen{source.sentence.tokens};
  auto emit = [&](std::vector<std::string> tokens, int position,
                  std::string phrase, const std::string& tag) {
    if (!seen.insert(tokens).second) return;
    out.push_back({SentenceFromTokens(std::move(tokens)), fb.label,
                   {source.id, position, std::move(phrase), tag}});
  };

  if (!options.cross_product) {
    for (const Site& site : sites) {
      for (const std::string& phrase : site.phrases) {
        emit(SpliceTokens(source.sentence.tokens, site.position,
                          PhraseTokens(phrase)),
             site.position, phrase, site.tag);
      }
    }
    return out;
  }

  if (sites.empty()) return out;
  std::vector<size_t> choice(sites.size(), 0);
  while (out.size() < options.max_cross_product) {
    std::vector<std::string> tokens = source.sentence.tokens;
    std::string joined;
    // Right to left so earlier positions stay valid after multi-token splices.
    for (size_t i = sites.size(); i-- > 0;) {
      const std::string& phrase = sites[i].phrases[choice[i]];
      tokens = SpliceTokens(tokens, sites[i].position, PhraseTokens(phrase));
      joined = joined.empty() ? phrase : phrase + " | " + joined;
    }
    emit(std::move(tokens), sites.front().position, joined, "cross_product");
    size_t i = sites.size();
    while (i-- > 0) {
      if (++choice[i] < sites[i].phrases.size()) break;
      choice[i] = 0;
    }
    if (i == static_cast<size_t>(-1)) break;
  }
  return out;
}

std::vector<Variation> EdaAugment(const LabeledExample& source, int n,
                                  const SynonymLexicon& lexicon,
                                  uint64_t seed) {
  if (n < 0) Fail(ErrorCode::kInvalidArgument, "negative EDA count");
  const std::vector<std::string>& tokens = source.sentence.tokens;
  std::vector<size_t> with_synonyms;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!lexicon.Synonyms(tokens[i]).empty()) with_synonyms.push_back(i);
  }

  enum Move { kSynonym = 0, kInsert = 1, kSwap = 2, kDelete = 3 };
  Rng rng = MakeRng(seed, {0xedaULL});
  std::vector<Variation> out;
  out.reserve(n);
  for (int v = 0; v < n; ++v) {
    int move = static_cast<int>(UniformIndex(rng, 4));
    if ((move == kSynonym || move == kInsert) && with_synonyms.empty()) {
      move = kSwap;
    }
    if ((move == kSwap || move == kDelete) && tokens.size() < 2) {
      move = with_synonyms.empty() ? -1 : kSynonym;
    }

    Variation variation;
    variation.label = source.label;
    variation.provenance.source_id = source.id;
    std::vector<std::string> edited;
    switch (move) {
      case kSynonym: {
        const size_t pos = with_synonyms[UniformIndex(rng, with_synonyms.size())];
        const auto& options = lexicon.Synonyms(tokens[pos]);
        const std::string& phrase = options[UniformIndex(rng, options.size())];
        edited = SpliceTokens(tokens, pos, PhraseTokens(phrase));
        variation.provenance.position = static_cast<int>(pos);
        variation.provenance.phrase = phrase;
        variation.provenance.tag = "eda_synonym";
        break;
      }
      case kInsert: {
        const size_t from = with_synonyms[UniformIndex(rng, with_synonyms.size())];
        const auto& options = lexicon.Synonyms(tokens[from]);
        const std::string& phrase = options[UniformIndex(rng, options.size())];
        const size_t at = UniformIndex(rng, tokens.size() + 1);
        const std::vector<std::string> inserted = PhraseTokens(phrase);
        edited.assign(tokens.begin(), tokens.begin() + at);
        edited.insert(edited.end(), inserted.begin(), inserted.end());
        edited.insert(edited.end(), tokens.begin() + at, tokens.end());
        variation.provenance.position = static_cast<int>(at);
        variation.provenance.phrase = phrase;
        variation.provenance.tag = "eda_insert";
        break;
      }
      case kSwap: {
        const size_t pos = UniformIndex(rng, tokens.size() - 1);
        edited = tokens;
        std::swap(edited[pos], edited[pos + 1]);
        variation.provenance.position = static_cast<int>(pos);
        variation.provenance.phrase = edited[pos] + " " + edited[pos + 1];
        variation.provenance.tag = "eda_swap";
        break;
      }
      case kDelete: {
        const size_t pos = UniformIndex(rng, tokens.size());
        edited = tokens;
        edited.erase(edited.begin() + pos);
        variation.provenance.position = static_cast<int>(pos);
        variation.provenance.phrase = tokens[pos];
        variation.provenance.tag = "eda_delete";
        break;
      }
      default:
        // Single token without synonyms: nothing can change.
        edited = tokens;
        variation.provenance.tag = "eda_identity";
        break;
    }
    variation.sentence = SentenceFromTokens(std::move(edited));
    out.push_back(std::move(variation));
  }
  return out;
}

}  // namespace mt
