// Copyright 2026 The privopt Authors
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

#ifndef PRIVOPT_RANDOM_H_
#define PRIVOPT_RANDOM_H_

#include <cstdint>
#include <random>

namespace privopt {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to decorrelate (seed, index) pairs.
constexpr uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream for trial `index` under `master_seed`. The stream a
// trial sees depends only on these two numbers, never on scheduling.
inline Rng MakeStream(uint64_t master_seed, uint64_t index) {
  return Rng(SplitMix64(SplitMix64(master_seed) ^ SplitMix64(index + 1)));
}

// Uniform on [0, 1) with 53 random bits.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace privopt

#endif  // PRIVOPT_RANDOM_H_
