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

#ifndef WPB_OPTIMIZER_HPP_
#define WPB_OPTIMIZER_HPP_

#include <functional>
#include <optional>

#include "wpb/core.hpp"
#include "wpb/rng.hpp"

namespace wpb {

// Objective value at x; when `grad` is non-null it also receives the gradient.
using Objective = std::function<double(const Vec& x, Vec* grad)>;

struct SearchConfig {
  int restarts = 8;
  int screen = 16;  // uniform draws screened per random start
  int ascent_steps = 200;
  double step_size = 0.05;
  bool include_best_seed = true;

  void validate() const;
};

struct SearchResult {
  Vec point;
  double value = 0.0;
};

// Multi-start projected gradient ascent on a box. Each ascent iterates
//   x <- clamp(x + t * grad f(x)),  t halved until f improves,
// where t starts at step_size and then at twice the last accepted step. When
// no gradient step improves, a compass search over axis and diagonal
// directions takes over until it finds a better point or its step drops
// below 1e-7. An ascent stops after `ascent_steps` accepted moves or when
// neither kind of move improves.
// Starts: `restarts` points, each the best of `screen` uniform draws; then the
// best box corner (boxes up to 12 dimensions); then `best_so_far` when given
// and enabled.
// The best final value wins; ties keep the earlier start.
SearchResult maximize(const Objective& objective, const WorkspaceBox& box,
                      const SearchConfig& config, const std::optional<Vec>& best_so_far,
                      Rng& rng);

// Exhaustive evaluation on a uniform grid with `resolution` nodes per axis.
// Only for boxes of dimension <= 3. Ties keep the first node in lexicographic
// order.
SearchResult grid_argmax(const Objective& objective, const WorkspaceBox& box, int resolution);

}  // namespace wpb

#endif  // WPB_OPTIMIZER_HPP_
