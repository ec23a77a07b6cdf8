// Copyright 2026 The Waypoint Bandits Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WPB_RNG_HPP_
#define WPB_RNG_HPP_

#include <cstdint>
#include <random>

namespace wpb {

// SplitMix64 finalizer (Steele, Lea, Flood). Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Independent random streams inside one run.
enum class Stream : std::uint64_t {
  kReset = 1,
  kMemberInit = 2,
  kMemberSample = 3,
  kSearch = 4,
  kPrefixSearch = 5,
  kUpdate = 6,
  kRandomArm = 7,
  kEvalReset = 8,
  kEvalSearch = 9,
};

// Seed splitting rule:
//   derive_seed(m, s, i, j) = mix64(mix64(mix64(m) ^ s) + i) ^ mix64(j + 0x9e3779b97f4a7c15)
// so (master, stream, episode, sub-index) map to decorrelated 64-bit seeds.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index,
                          std::uint64_t sub = 0);

// mt19937_64 has a standardized output sequence; the conversions below are
// fixed here so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in {0, ..., n-1}; rejection sampling removes modulo bias.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace wpb

#endif  // WPB_RNG_HPP_
