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

#include "wpb/env.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "wpb/rng.hpp"

namespace wpb {
namespace {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  int k = 0;
  for (double x : values) v[k++] = x;
  return v;
}

double planar_distance(double ax, double ay, double bx, double by) {
  const double dx = ax - bx, dy = ay - by;
  return std::sqrt(dx * dx + dy * dy);
}

Coords clamp_to(const Coords& x, const WorkspaceBox& box) {
  Coords out = x;
  for (int k = 0; k < out.size(); ++k) out[k] = std::clamp(out[k], box.lo[k], box.hi[k]);
  return out;
}

// Drives the controller and hands every visited state (including s^0) to
// `visit`.
template <typename Visit>
void drive(const WorldState& start, const Trajectory& trajectory, const EnvSpec& spec,
           const ControllerConfig& controller, Visit&& visit) {
  const int segments = static_cast<int>(trajectory.size());
  if (segments < 1 || segments > controller.waypoint_count()) {
    throw std::invalid_argument("rollout: trajectory length must be in [1, T]");
  }
  const std::vector<int> budget = controller.segment_steps(segments);
  WorldState state = start;
  visit(state);
  for (int seg = 0; seg < segments; ++seg) {
    if (trajectory[seg].dim() != spec.robot_dim) {
      throw std::invalid_argument("rollout: waypoint dimension does not match the environment");
    }
    const Coords goal = clamp_to(trajectory[seg].coords, spec.workspace);
    const Coords origin = state.robot;
    const int n = budget[seg];
    Waypoint command;
    for (int k = 1; k <= n; ++k) {
      if (k == n) {
        command.coords = goal;
      } else {
        const double f = static_cast<double>(k) / n;
        command.coords = origin + f * (goal - origin);
      }
      state = step(state, command, spec);
      visit(state);
    }
  }
}

// Coordinate grid over box at `resolution` nodes per axis, visited in
// lexicographic order (last axis fastest).
template <typename Fn>
void for_each_grid_node(const WorkspaceBox& box, int resolution, Fn&& fn) {
  const int d = box.dim();
  std::array<int, kMaxCoords> idx{};
  Coords x(d);
  while (true) {
    for (int k = 0; k < d; ++k) {
      x[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * idx[k] / (resolution - 1);
    }
    fn(x);
    int k = d - 1;
    while (k >= 0 && ++idx[k] == resolution) idx[k--] = 0;
    if (k < 0) break;
  }
}

OracleResult reach_oracle(const WorldState& start, const EnvSpec& spec,
                          const ControllerConfig& controller, int segments, int resolution) {
  const Waypoint target(Coords(start.objects.head(2)));
  auto trajectory_for = [&](const Coords& w) {
    std::vector<Waypoint> ws{Waypoint(w)};
    for (int j = 1; j < segments; ++j) ws.push_back(target);
    return Trajectory(std::move(ws));
  };
  auto value = [&](const Coords& w) {
    return rollout_reward(start, trajectory_for(w), spec, controller);
  };

  // Keep the few best grid nodes as refinement starts.
  constexpr int kStarts = 3;
  std::vector<std::pair<double, Coords>> best;
  for_each_grid_node(spec.workspace, resolution, [&](const Coords& w) {
    const double v = value(w);
    if (static_cast<int>(best.size()) < kStarts || v > best.back().first) {
      best.emplace_back(v, w);
      std::stable_sort(best.begin(), best.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      if (static_cast<int>(best.size()) > kStarts) best.pop_back();
    }
  });

  // Compass search over axis and diagonal directions.
  const double spacing =
      ((spec.workspace.hi - spec.workspace.lo) / (resolution - 1)).minCoeff();
  static const std::array<std::array<double, 2>, 8> kDirs = {{{1, 0},
                                                             {-1, 0},
                                                             {0, 1},
                                                             {0, -1},
                                                             {M_SQRT1_2, M_SQRT1_2},
                                                             {M_SQRT1_2, -M_SQRT1_2},
                                                             {-M_SQRT1_2, M_SQRT1_2},
                                                             {-M_SQRT1_2, -M_SQRT1_2}}};
  OracleResult result{best.front().first, trajectory_for(best.front().second)};
  for (auto [v, w] : best) {
    double h = spacing;
    for (int iter = 0; iter < 4000 && h > 1e-10; ++iter) {
      bool moved = false;
      for (const auto& dir : kDirs) {
        Coords cand(2);
        cand << w[0] + h * dir[0], w[1] + h * dir[1];
        cand = clamp_to(cand, spec.workspace);
        const double cv = value(cand);
        if (cv > v) {
          v = cv;
          w = cand;
          moved = true;
          break;
        }
      }
      if (!moved) h *= 0.5;
    }
    if (v > result.reward) result = {v, trajectory_for(w)};
  }
  return result;
}

OracleResult scripted_oracle(const WorldState& start, const EnvSpec& spec,
                             const ControllerConfig& controller, int segments) {
  constexpr double kRadius = 0.05;
  constexpr int kResolution = 11;
  Trajectory current = scripted_trajectory(start, spec, segments);
  double current_value = rollout_reward(start, current, spec, controller);
  for (int j = 0; j < segments; ++j) {
    const Coords center = current[j].coords;
    Vec lo = (center.array() - kRadius).matrix();
    Vec hi = (center.array() + kRadius).matrix();
    const WorkspaceBox local(lo, hi);
    std::vector<Waypoint> ws = current.waypoints();
    Trajectory best = current;
    double best_value = current_value;
    for_each_grid_node(local, kResolution, [&](const Coords& node) {
      ws[j].coords = clamp_to(node, spec.workspace);
      Trajectory cand(ws);
      const double v = rollout_reward(start, cand, spec, controller);
      if (v > best_value) {
        best_value = v;
        best = std::move(cand);
      }
    });
    current = std::move(best);
    current_value = best_value;
  }
  return {current_value, current};
}

}  // namespace

EnvKind parse_env_kind(std::string_view name) {
  if (name == "reach") return EnvKind::kReach;
  if (name == "lift") return EnvKind::kLift;
  if (name == "drawer") return EnvKind::kDrawer;
  throw std::invalid_argument("unknown environment '" + std::string(name) +
                              "' (expected reach, lift or drawer)");
}

std::string_view env_name(EnvKind kind) {
  switch (kind) {
    case EnvKind::kReach:
      return "reach";
    case EnvKind::kLift:
      return "lift";
    case EnvKind::kDrawer:
      return "drawer";
  }
  return "?";
}

int EnvSpec::object_dim() const {
  switch (kind) {
    case EnvKind::kReach:
    case EnvKind::kLift:
      return 2;
    case EnvKind::kDrawer:
      return 3;
  }
  return 0;
}

EnvSpec make_env_spec(EnvKind kind, int horizon) {
  if (horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  EnvSpec spec;
  spec.kind = kind;
  spec.horizon = horizon;
  switch (kind) {
    case EnvKind::kReach:
      spec.robot_dim = 2;
      spec.workspace = WorkspaceBox(make_vec({-1.0, 0.0}), make_vec({1.0, 1.0}));
      spec.home = Coords(make_vec({0.0, 0.5}));
      spec.reset_box = WorkspaceBox(make_vec({-0.5, 0.2}), make_vec({0.5, 0.8}));
      break;
    case EnvKind::kLift:
      spec.robot_dim = 3;
      spec.workspace = WorkspaceBox(make_vec({-1.0, 0.0, 0.0}), make_vec({1.0, 1.0, 1.0}));
      spec.home = Coords(make_vec({0.0, 0.5, 0.0}));
      spec.reset_box = WorkspaceBox(make_vec({-0.5}), make_vec({0.5}));
      break;
    case EnvKind::kDrawer:
      spec.robot_dim = 3;
      spec.workspace = WorkspaceBox(make_vec({-1.0, 0.0, 0.0}), make_vec({1.0, 1.0, 1.0}));
      spec.home = Coords(make_vec({0.0, 0.5, 0.0}));
      spec.reset_box = WorkspaceBox(make_vec({0.3, 0.2}), make_vec({0.7, 0.6}));
      break;
  }
  return spec;
}

ControllerConfig::ControllerConfig(int horizon, int waypoint_count)
    : horizon_(horizon), waypoint_count_(waypoint_count) {
  if (waypoint_count < 1 || waypoint_count >= horizon) {
    throw std::invalid_argument("controller requires 1 <= T < H");
  }
}

std::vector<int> ControllerConfig::segment_steps(int segments) const {
  if (segments < 1 || segments > waypoint_count_) {
    throw std::invalid_argument("segment count must be in [1, T]");
  }
  std::vector<int> steps(segments, steps_per_segment());
  if (segments == waypoint_count_) steps.back() += horizon_ % waypoint_count_;
  return steps;
}

WorldState reset(const EnvSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  WorldState s;
  s.robot = spec.home;
  s.grasped = false;
  switch (spec.kind) {
    case EnvKind::kReach: {
      const double tx = rng.uniform(spec.reset_box.lo[0], spec.reset_box.hi[0]);
      const double ty = rng.uniform(spec.reset_box.lo[1], spec.reset_box.hi[1]);
      s.objects = Coords(make_vec({tx, ty}));
      break;
    }
    case EnvKind::kLift: {
      const double bx = rng.uniform(spec.reset_box.lo[0], spec.reset_box.hi[0]);
      s.objects = Coords(make_vec({bx, 0.0}));
      break;
    }
    case EnvKind::kDrawer: {
      const double hx = rng.uniform(spec.reset_box.lo[0], spec.reset_box.hi[0]);
      const double hy = rng.uniform(spec.reset_box.lo[1], spec.reset_box.hi[1]);
      s.objects = Coords(make_vec({hx, hy, 0.0}));
      break;
    }
  }
  return s;
}

// Contact rules:
//  - every command is clamped into the workspace (which keeps y >= 0);
//  - lift: a grasp starts when the gripper is within grasp_radius of the block
//    with gripper > 0.5; while grasped the block follows the gripper; opening
//    the gripper (<= 0.5) drops the block straight to the table;
//  - drawer: same grasp rule on the handle; while grasped the gripper is
//    pinned to the handle height and may only pull (x between the fully open
//    position and the handle's current x); displacement follows the gripper.
WorldState step(const WorldState& state, const Waypoint& command, const EnvSpec& spec) {
  if (command.dim() != spec.robot_dim) {
    throw std::invalid_argument("step: command dimension does not match the environment");
  }
  WorldState next = state;
  next.robot = clamp_to(command.coords, spec.workspace);
  switch (spec.kind) {
    case EnvKind::kReach:
      break;
    case EnvKind::kLift: {
      const bool closed = next.robot[2] > 0.5;
      if (state.grasped) {
        if (closed) {
          next.objects[0] = next.robot[0];
          next.objects[1] = next.robot[1];
        } else {
          next.grasped = false;
          next.objects[1] = 0.0;
        }
      } else if (closed && planar_distance(next.robot[0], next.robot[1], state.objects[0],
                                           state.objects[1]) < spec.grasp_radius) {
        next.grasped = true;
        next.objects[0] = next.robot[0];
        next.objects[1] = next.robot[1];
      }
      break;
    }
    case EnvKind::kDrawer: {
      const bool closed = next.robot[2] > 0.5;
      const double x0 = state.objects[0];
      const double hy = state.objects[1];
      const double handle_x = x0 - state.objects[2];
      bool hold = false;
      if (state.grasped) {
        hold = closed;
        next.grasped = closed;
      } else if (closed &&
                 planar_distance(next.robot[0], next.robot[1], handle_x, hy) < spec.grasp_radius) {
        hold = true;
        next.grasped = true;
      }
      if (hold) {
        next.robot[1] = hy;
        next.robot[0] = std::clamp(next.robot[0], x0 - spec.drawer_travel, handle_x);
        next.robot = clamp_to(next.robot, spec.workspace);
        next.objects[2] = std::clamp(x0 - next.robot[0], 0.0, spec.drawer_travel);
      }
      break;
    }
  }
  return next;
}

double reward(const WorldState& state, const EnvSpec& spec) {
  const double gx = state.robot[0];
  const double gy = state.robot[1];
  switch (spec.kind) {
    case EnvKind::kReach:
      return 1.0 - std::tanh(2.0 * planar_distance(gx, gy, state.objects[0], state.objects[1]));
    case EnvKind::kLift: {
      const double d = planar_distance(gx, gy, state.objects[0], state.objects[1]);
      double r = 0.5 * (1.0 - std::tanh(5.0 * d));
      if (state.grasped) {
        r += 0.5 + std::clamp(state.objects[1] / spec.lift_height, 0.0, 1.0);
      }
      return r;
    }
    case EnvKind::kDrawer: {
      const double handle_x = state.objects[0] - state.objects[2];
      const double d = planar_distance(gx, gy, handle_x, state.objects[1]);
      double r = 0.5 * (1.0 - std::tanh(5.0 * d));
      if (state.grasped) r += 0.5;
      r += 2.0 * state.objects[2] / spec.drawer_travel;
      return r;
    }
  }
  return 0.0;
}

RolloutResult rollout(const WorldState& start, const Trajectory& trajectory, const EnvSpec& spec,
                      const ControllerConfig& controller) {
  RolloutResult out;
  out.trace.states.reserve(static_cast<std::size_t>(controller.horizon()) + 1);
  drive(start, trajectory, spec, controller, [&](const WorldState& s) {
    out.trace.states.push_back(s);
  });
  out.total_reward = total_reward(out.trace, [&](const WorldState& s) { return reward(s, spec); });
  return out;
}

double rollout_reward(const WorldState& start, const Trajectory& trajectory, const EnvSpec& spec,
                      const ControllerConfig& controller) {
  double total = 0.0;
  drive(start, trajectory, spec, controller,
        [&](const WorldState& s) { total += reward(s, spec); });
  return total;
}

Vec state_features(const WorldState& state) {
  Vec f(state.robot.size() + state.objects.size());
  f << state.robot, state.objects;
  return f;
}

WorkspaceBox feature_box(const EnvSpec& spec) {
  const int d = spec.robot_dim + spec.object_dim();
  Vec lo(d), hi(d);
  // Constant features get a unit-width box centred on their value.
  for (int k = 0; k < spec.robot_dim; ++k) {
    lo[k] = spec.home[k] - 1.0;
    hi[k] = spec.home[k] + 1.0;
  }
  const int o = spec.robot_dim;
  switch (spec.kind) {
    case EnvKind::kReach:
      lo.segment(o, 2) = spec.reset_box.lo;
      hi.segment(o, 2) = spec.reset_box.hi;
      break;
    case EnvKind::kLift:
      lo[o] = spec.reset_box.lo[0];
      hi[o] = spec.reset_box.hi[0];
      lo[o + 1] = 0.0;
      hi[o + 1] = 1.0;
      break;
    case EnvKind::kDrawer:
      lo.segment(o, 2) = spec.reset_box.lo;
      hi.segment(o, 2) = spec.reset_box.hi;
      lo[o + 2] = 0.0;
      hi[o + 2] = spec.drawer_travel;
      break;
  }
  return WorkspaceBox(lo, hi);
}

Trajectory scripted_trajectory(const WorldState& start, const EnvSpec& spec, int segments) {
  std::vector<Waypoint> ws;
  switch (spec.kind) {
    case EnvKind::kReach:
      for (int j = 0; j < segments; ++j) ws.emplace_back(Coords(start.objects.head(2)));
      break;
    case EnvKind::kLift: {
      const double b = start.objects[0];
      ws.push_back(Waypoint{b, 0.0, 1.0});
      for (int j = 1; j < segments; ++j) ws.push_back(Waypoint{b, 0.8, 1.0});
      break;
    }
    case EnvKind::kDrawer: {
      const double hx = start.objects[0] - start.objects[2];
      const double hy = start.objects[1];
      ws.push_back(Waypoint{hx, hy, 1.0});
      for (int j = 1; j < segments; ++j) {
        ws.push_back(Waypoint{start.objects[0] - spec.drawer_travel, hy, 1.0});
      }
      break;
    }
  }
  return Trajectory(std::move(ws));
}

OracleResult oracle_solution(const WorldState& start, const EnvSpec& spec,
                             const ControllerConfig& controller, int segments, int resolution) {
  if (resolution < 2) throw std::invalid_argument("oracle resolution must be at least 2");
  if (spec.kind == EnvKind::kReach) {
    return reach_oracle(start, spec, controller, segments, resolution);
  }
  return scripted_oracle(start, spec, controller, segments);
}

}  // namespace wpb
