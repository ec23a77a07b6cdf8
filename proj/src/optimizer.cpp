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

#include "wpb/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpb {
namespace {

constexpr int kMaxHalvings = 40;
constexpr double kMinPatternStep = 1e-7;
constexpr int kMaxCornerDim = 12;

// Axis and pairwise-diagonal unit directions. Used when the gradient step
// fails, which happens on the kinks of piecewise-linear objectives.
std::vector<Vec> pattern_directions(int d) {
  std::vector<Vec> dirs;
  for (int i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      Vec v = Vec::Zero(d);
      v[i] = s;
      dirs.push_back(v);
    }
  }
  const double c = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          Vec v = Vec::Zero(d);
          v[i] = si * c;
          v[j] = sj * c;
          dirs.push_back(v);
        }
      }
    }
  }
  return dirs;
}

SearchResult ascend(const Objective& f, const WorkspaceBox& box, const SearchConfig& config,
                    const std::vector<Vec>& dirs, Vec x) {
  x = box.clamp(x);
  Vec grad;
  double value = f(x, &grad);
  // The trial step starts at twice the last accepted one, so flat regions
  // are crossed quickly and steep ones still backtrack.
  double accepted = config.step_size / 2.0;
  double pattern = config.step_size;
  auto take = [&](Vec cand) {
    Vec cand_grad;
    const double cand_value = f(cand, &cand_grad);
    if (!(cand_value > value)) return false;
    x = std::move(cand);
    grad = std::move(cand_grad);
    value = cand_value;
    return true;
  };
  for (int it = 0; it < config.ascent_steps; ++it) {
    bool improved = false;
    double t = 2.0 * accepted;
    for (int h = 0; h < kMaxHalvings && !improved; ++h, t *= 0.5) {
      Vec cand = box.clamp(x + t * grad);
      if (cand == x) break;  // projected gradient vanished at this scale
      if (take(std::move(cand))) {
        accepted = t;
        improved = true;
      }
    }
    while (!improved && pattern >= kMinPatternStep) {
      for (const Vec& d : dirs) {
        Vec cand = box.clamp(x + pattern * d);
        if (cand != x && take(std::move(cand))) {
          improved = true;
          break;
        }
      }
      if (!improved) pattern *= 0.5;
    }
    if (!improved) break;
  }
  return {std::move(x), value};
}

}  // namespace

void SearchConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("search restarts must be >= 1");
  if (screen < 1) throw std::invalid_argument("search screen must be >= 1");
  if (ascent_steps < 1) throw std::invalid_argument("search ascent_steps must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("search step_size must be > 0");
}

SearchResult maximize(const Objective& objective, const WorkspaceBox& box,
                      const SearchConfig& config, const std::optional<Vec>& best_so_far,
                      Rng& rng) {
  config.validate();
  std::vector<Vec> starts;
  starts.reserve(config.restarts + 2);
  for (int r = 0; r < config.restarts; ++r) {
    Vec best_x;
    double best_v = -INFINITY;
    for (int c = 0; c < config.screen; ++c) {
      Vec x(box.dim());
      for (int k = 0; k < box.dim(); ++k) x[k] = rng.uniform(box.lo[k], box.hi[k]);
      const double v = config.screen > 1 ? objective(x, nullptr) : 0.0;
      if (c == 0 || v > best_v) {
        best_v = v;
        best_x = std::move(x);
      }
    }
    starts.push_back(std::move(best_x));
  }
  if (box.dim() <= kMaxCornerDim) {
    const int d = box.dim();
    Vec best_c;
    double best_v = -INFINITY;
    for (int mask = 0; mask < (1 << d); ++mask) {
      Vec c(d);
      for (int k = 0; k < d; ++k) c[k] = (mask >> k) & 1 ? box.hi[k] : box.lo[k];
      const double v = objective(c, nullptr);
      if (v > best_v) {
        best_v = v;
        best_c = std::move(c);
      }
    }
    starts.push_back(std::move(best_c));
  }
  if (config.include_best_seed && best_so_far) {
    if (best_so_far->size() != box.dim()) {
      throw std::invalid_argument("maximize: seed has the wrong dimension");
    }
    starts.push_back(*best_so_far);
  }

  const std::vector<Vec> dirs = pattern_directions(box.dim());
  SearchResult best;
  bool have = false;
  for (const auto& s : starts) {
    SearchResult r = ascend(objective, box, config, dirs, s);
    if (!have || r.value > best.value) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

SearchResult grid_argmax(const Objective& objective, const WorkspaceBox& box, int resolution) {
  const int d = box.dim();
  if (d < 1 || d > 3) {
    throw std::invalid_argument("grid_argmax supports 1 to 3 dimensions, got " +
                                std::to_string(d));
  }
  if (resolution < 2) throw std::invalid_argument("grid_argmax resolution must be >= 2");
  std::vector<int> idx(d, 0);
  Vec x(d);
  SearchResult best;
  bool have = false;
  while (true) {
    for (int k = 0; k < d; ++k) {
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * idx[k] / (resolution - 1);
    }
    const double v = objective(x, nullptr);
    if (!have || v > best.value) {
      best = {x, v};
      have = true;
    }
    int k = d - 1;
    while (k >= 0 && ++idx[k] == resolution) idx[k--] = 0;
    if (k < 0) break;
  }
  return best;
}

}  // namespace wpb
