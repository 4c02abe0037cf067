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

#ifndef MT_MASKED_LM_H_
#define MT_MASKED_LM_H_

#include <chrono>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mt/corpus.h"
#include "mt/jsonl.h"

namespace mt {

inline constexpr char kMaskToken[] = "[MASK]";
inline constexpr char kMaskedLmUrlEnv[] = "MT_MASKED_LM_URL";
inline constexpr int kInconsequentialTopK = 3;

// A sentence with one position replaced by kMaskToken. `masked_word` is the
// hidden original (may be empty); it is never returned as a candidate.
struct MaskedLmQuery {
  std::vector<std::string> tokens;
  int mask_index = 0;
  int k = kInconsequentialTopK;
  std::string masked_word;

  static MaskedLmQuery Mask(const Sentence& s, int position, int k);
  // Throws kInvalidArgument unless exactly tokens[mask_index] is masked and
  // k >= 1.
  void Validate() const;
};

struct WordScore {
  std::string word;
  double confidence = 0.0;

  bool operator==(const WordScore&) const = default;
};

class MaskedLm {
 public:
  virtual ~MaskedLm() = default;
  virtual std::vector<WordScore> TopK(const MaskedLmQuery& query) const = 0;
};

// Context-statistics stand-in for a neural masked LM. A corpus token w at
// position j earns one point when its left neighbour equals the query's
// left neighbour and one point when its right neighbour equals the query's
// right neighbour (sentence boundaries count as neighbours). Candidates
// are ranked by the number of occurrences matching both neighbours, then by
// points, then lexicographically. Confidences are normalized scores that
// follow the same order.
class CorpusMaskedLm final : public MaskedLm {
 public:
  explicit CorpusMaskedLm(std::span<const Sentence> corpus);

  std::vector<WordScore> TopK(const MaskedLmQuery& query) const override;

 private:
  // context word -> (candidate word -> occurrences)
  std::map<std::string, std::map<std::string, int>> after_;
  std::map<std::string, std::map<std::string, int>> before_;
  // (left, right) -> (candidate word -> occurrences)
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>>
      between_;
};

// Client for an external recommender speaking the /mask protocol. Any
// transport or protocol failure logs a warning and defers to `fallback`.
class RemoteMaskedLm final : public MaskedLm {
 public:
  RemoteMaskedLm(std::string base_url, std::shared_ptr<const MaskedLm> fallback,
                 std::chrono::milliseconds timeout = std::chrono::seconds(2));

  std::vector<WordScore> TopK(const MaskedLmQuery& query) const override;

 private:
  std::string base_url_;
  std::shared_ptr<const MaskedLm> fallback_;
  std::chrono::milliseconds timeout_;
};

// Wire format helpers for POST /mask.
Json MaskRequestToJson(const MaskedLmQuery& query);
MaskedLmQuery MaskRequestFromJson(const Json& request);
Json MaskResponseToJson(std::span<const WordScore> candidates);
std::vector<WordScore> MaskResponseFromJson(const Json& response);

// Corpus fallback, wrapped in a RemoteMaskedLm when MT_MASKED_LM_URL is set.
std::shared_ptr<const MaskedLm> MakeMaskedLm(std::span<const Sentence> corpus);

}  // namespace mt

#endif  // MT_MASKED_LM_H_
