// Copyright 2026 The Obsaudit Authors
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

#ifndef OBSAUDIT_RNG_H_
#define OBSAUDIT_RNG_H_

#include <cstdint>
#include <random>

namespace obsaudit {

// Every random draw in the library goes through an explicitly passed engine.
using Rng = std::mt19937_64;

// SplitMix64 output function (Steele, Lea & Flood).
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-streams of an experiment. The numeric values are part of
// the reproducibility contract; do not renumber.
enum class StreamPurpose : uint64_t {
  kDataset = 1,
  kMechanism = 2,
  kProxyTraining = 3,
  kGame = 4,
};

// Stream seed = SplitMix64(base_seed XOR SplitMix64(stream_id)), where
// stream_id = (purpose << 48) | index. Two different (purpose, index) pairs
// never share a stream id for index < 2^48.
constexpr uint64_t DeriveStreamSeed(uint64_t base_seed, StreamPurpose purpose,
                                    uint64_t index) {
  const uint64_t stream_id =
      (static_cast<uint64_t>(purpose) << 48) | (index & ((1ULL << 48) - 1));
  return SplitMix64(base_seed ^ SplitMix64(stream_id));
}

inline Rng MakeStream(uint64_t base_seed, StreamPurpose purpose,
                      uint64_t index) {
  return Rng(DeriveStreamSeed(base_seed, purpose, index));
}

// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace obsaudit

#endif  // OBSAUDIT_RNG_H_
