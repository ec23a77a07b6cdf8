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

#include "wpb/bounds.hpp"

#include <cmath>
#include <initializer_list>
#include <optional>
#include <stdexcept>

namespace wpb {
namespace {

using Wide = unsigned __int128;

// Exact product in 128 bits, or nullopt on overflow.
std::optional<Wide> exact_product(std::initializer_list<std::uint64_t> factors) {
  Wide acc = 1;
  for (std::uint64_t f : factors) {
    if (__builtin_mul_overflow(acc, Wide(f), &acc)) return std::nullopt;
  }
  return acc;
}

// sqrt of the product: exact integer product when it fits, otherwise the
// product of the square roots in long double.
double sqrt_product(std::initializer_list<std::uint64_t> factors) {
  if (const auto p = exact_product(factors)) return std::sqrt(static_cast<double>(*p));
  long double r = 1.0L;
  for (std::uint64_t f : factors) r *= std::sqrt(static_cast<long double>(f));
  return static_cast<double>(r);
}

}  // namespace

void ProblemSizes::validate() const {
  if (episodes == 0 || waypoints == 0 || horizon == 0 || n_states == 0 || n_actions == 0 ||
      n_robot_states == 0) {
    throw std::invalid_argument("problem sizes must all be positive");
  }
  if (waypoints >= horizon) throw std::invalid_argument("problem sizes require T < H");
  if (n_robot_states > n_states) {
    throw std::invalid_argument("problem sizes require |S_R| <= |S|");
  }
}

double mab_bound(const ProblemSizes& s) {
  s.validate();
  return sqrt_product({s.episodes, s.waypoints, s.n_robot_states});
}

double mdp_bound(const ProblemSizes& s) {
  s.validate();
  return sqrt_product({s.episodes, s.horizon, s.horizon, s.n_states, s.n_actions});
}

bool prefer_mab(const ProblemSizes& s) {
  s.validate();
  // The left side always fits in 128 bits; an overflowing right side is larger.
  const Wide lhs = Wide(s.waypoints) * s.n_robot_states;
  const auto rhs = exact_product({s.horizon, s.horizon, s.n_states, s.n_actions});
  return !rhs || lhs < *rhs;
}

}  // namespace wpb
