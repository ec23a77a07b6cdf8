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

#ifndef WPB_BOUNDS_HPP_
#define WPB_BOUNDS_HPP_

#include <cstdint>

namespace wpb {

// Discrete problem sizes for the order-level regret lower bounds. Constants
// hidden by the Omega notation are dropped: the functions below return only
// the bound arguments, which is what the formulation comparison needs.
struct ProblemSizes {
  std::uint64_t episodes = 1;        // K
  std::uint64_t waypoints = 1;       // T
  std::uint64_t horizon = 2;         // H
  std::uint64_t n_states = 1;        // |S|
  std::uint64_t n_actions = 1;       // |A|
  std::uint64_t n_robot_states = 1;  // |S_R|

  // Throws std::invalid_argument unless all sizes are positive, T < H and
  // |S_R| <= |S|.
  void validate() const;
};

// sqrt(K * T * |S_R|): one bandit per waypoint.
double mab_bound(const ProblemSizes& sizes);

// sqrt(K * H^2 * |S| * |A|): tabular episodic MDP.
double mdp_bound(const ProblemSizes& sizes);

// T * |S_R| < H^2 * |S| * |A|, evaluated exactly in integer arithmetic.
bool prefer_mab(const ProblemSizes& sizes);

}  // namespace wpb

#endif  // WPB_BOUNDS_HPP_
