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

#ifndef MT_RANDOM_H_
#define MT_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mt {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent stream seeds from a base
// seed and a sequence of salts.
inline uint64_t MixSeed(uint64_t seed, std::initializer_list<uint64_t> salts) {
  uint64_t z = seed;
  for (uint64_t salt : salts) {
    z += 0x9e3779b97f4a7c15ULL + salt;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
  }
  return z;
}

inline Rng MakeRng(uint64_t seed, std::initializer_list<uint64_t> salts = {}) {
  return Rng(MixSeed(seed, salts));
}

// Uniform index in [0, n). n must be positive.
inline size_t UniformIndex(Rng& rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

}  // namespace mt

#endif  // MT_RANDOM_H_
