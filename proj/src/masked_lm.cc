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

#include "mt/masked_lm.h"

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "httplib.h"
#include "mt/error.h"

namespace mt {
namespace {

constexpr char kBoundary[] = "\x01";

void Exclude(std::vector<WordScore>& candidates, const std::string& word) {
  std::erase_if(candidates, [&](const WordScore& c) {
    return c.word == word || c.word == kMaskToken || c.word.empty();
  });
}

}  // namespace

MaskedLmQuery MaskedLmQuery::Mask(const Sentence& s, int position, int k) {
  if (position < 0 || position >= static_cast<int>(s.size())) {
    Fail(ErrorCode::kOutOfRange, "mask position out of range");
  }
  MaskedLmQuery query;
  query.tokens = s.tokens;
  query.masked_word = s.tokens[position];
  query.tokens[position] = kMaskToken;
  query.mask_index = position;
  query.k = k;
  return query;
}

void MaskedLmQuery::Validate() const {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "masked-LM k must be >= 1");
  if (mask_index < 0 || mask_index >= static_cast<int>(tokens.size())) {
    Fail(ErrorCode::kInvalidArgument, "mask_index out of range");
  }
  const auto masks = std::count(tokens.begin(), tokens.end(), kMaskToken);
  if (masks != 1 || tokens[mask_index] != kMaskToken) {
    Fail(ErrorCode::kInvalidArgument,
         "query must contain exactly one [MASK] at mask_index");
  }
}

CorpusMaskedLm::CorpusMaskedLm(std::span<const Sentence> corpus) {
  for (const Sentence& s : corpus) {
    const size_t n = s.tokens.size();
    for (size_t j = 0; j < n; ++j) {
      const std::string& left = j == 0 ? kBoundary : s.tokens[j - 1];
      const std::string& right = j + 1 == n ? kBoundary : s.tokens[j + 1];
      ++after_[left][s.tokens[j]];
      ++before_[right][s.tokens[j]];
      ++between_[{left, right}][s.tokens[j]];
    }
  }
}

std::vector<WordScore> CorpusMaskedLm::TopK(const MaskedLmQuery& query) const {
  query.Validate();
  const size_t i = static_cast<size_t>(query.mask_index);
  const std::string left = i == 0 ? kBoundary : query.tokens[i - 1];
  const std::string right =
      i + 1 == query.tokens.size() ? kBoundary : query.tokens[i + 1];

  struct Tally {
    int both = 0;
    int points = 0;
  };
  std::map<std::string, Tally> tally;
  if (auto it = after_.find(left); it != after_.end()) {
    for (const auto& [word, count] : it->second) tally[word].points += count;
  }
  if (auto it = before_.find(right); it != before_.end()) {
    for (const auto& [word, count] : it->second) tally[word].points += count;
  }
  if (auto it = between_.find({left, right}); it != between_.end()) {
    for (const auto& [word, count] : it->second) tally[word].both = count;
  }
  tally.erase(query.masked_word);
  tally.erase(kMaskToken);

  // Occurrences matching both neighbours dominate; the combined score keeps
  // confidences in rank order.
  double max_points = 0.0;
  for (const auto& [word, t] : tally) {
    max_points = std::max<double>(max_points, t.points);
  }
  double total = 0.0;
  std::vector<WordScore> ranked;
  ranked.reserve(tally.size());
  for (const auto& [word, t] : tally) {
    const double score = t.both * (max_points + 1.0) + t.points;
    ranked.push_back({word, score});
    total += score;
  }
  // std::map iteration is already lexicographic; stable_sort keeps it on ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const WordScore& a, const WordScore& b) {
                     return a.confidence > b.confidence;
                   });
  if (ranked.size() > static_cast<size_t>(query.k)) ranked.resize(query.k);
  for (WordScore& c : ranked) c.confidence /= total;
  return ranked;
}

Json MaskRequestToJson(const MaskedLmQuery& query) {
  return {{"tokens", query.tokens},
          {"mask_index", query.mask_index},
          {"k", query.k}};
}

MaskedLmQuery MaskRequestFromJson(const Json& request) {
  MaskedLmQuery query;
  try {
    query.tokens = request.at("tokens").get<std::vector<std::string>>();
    query.mask_index = request.at("mask_index").get<int>();
    query.k = request.at("k").get<int>();
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad /mask request: ") + e.what());
  }
  query.Validate();
  return query;
}

Json MaskResponseToJson(std::span<const WordScore> candidates) {
  Json list = Json::array();
  for (const WordScore& c : candidates) {
    list.push_back({{"word", c.word}, {"confidence", c.confidence}});
  }
  return {{"candidates", std::move(list)}};
}

std::vector<WordScore> MaskResponseFromJson(const Json& response) {
  std::vector<WordScore> out;
  try {
    for (const Json& c : response.at("candidates")) {
      out.push_back({c.at("word").get<std::string>(),
                     c.at("confidence").get<double>()});
    }
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, std::string("bad /mask response: ") + e.what());
  }
  return out;
}

RemoteMaskedLm::RemoteMaskedLm(std::string base_url,
                               std::shared_ptr<const MaskedLm> fallback,
                               std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)),
      fallback_(std::move(fallback)),
      timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::vector<WordScore> RemoteMaskedLm::TopK(const MaskedLmQuery& query) const {
  query.Validate();
  try {
    // Split "http://host:port/prefix" into client base and path prefix.
    std::string host = base_url_;
    std::string prefix;
    const size_t scheme = host.find("://");
    const size_t slash =
        host.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
      prefix = host.substr(slash);
      host.resize(slash);
    }
    httplib::Client client(host);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    MaskedLmQuery wire = query;
    // One extra so dropping the hidden word still leaves k candidates.
    wire.k = query.k + 1;
    auto result = client.Post(prefix + "/mask", MaskRequestToJson(wire).dump(),
                              "application/json");
    if (!result) {
      throw Error(ErrorCode::kUnavailable,
                  "masked-LM service unreachable: " +
                      httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      throw Error(ErrorCode::kUnavailable,
                  "masked-LM service returned HTTP " +
                      std::to_string(result->status));
    }
    std::vector<WordScore> candidates =
        MaskResponseFromJson(Json::parse(result->body));
    Exclude(candidates, query.masked_word);
    if (candidates.size() > static_cast<size_t>(query.k)) {
      candidates.resize(query.k);
    }
    return candidates;
  } catch (const std::exception& e) {
    std::cerr << "warning: " << e.what() << "; using corpus fallback\n";
  }
  if (!fallback_) return {};
  return fallback_->TopK(query);
}

std::shared_ptr<const MaskedLm> MakeMaskedLm(std::span<const Sentence> corpus) {
  auto local = std::make_shared<const CorpusMaskedLm>(corpus);
  const char* url = std::getenv(kMaskedLmUrlEnv);
  if (url == nullptr || *url == '\0') return local;
  return std::make_shared<const RemoteMaskedLm>(url, local);
}

}  // namespace mt
