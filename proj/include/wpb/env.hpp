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

#ifndef WPB_ENV_HPP_
#define WPB_ENV_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wpb/core.hpp"

namespace wpb {

// Planar manipulation tasks. Robot coordinates are (x, y) for reach and
// (x, y, gripper) for lift and drawer; y = 0 is the table surface.
//
//   reach   objects = (target_x, target_y)
//   lift    objects = (block_x, block_y)
//   drawer  objects = (handle_x_initial, handle_y, displacement)
enum class EnvKind { kReach, kLift, kDrawer };

EnvKind parse_env_kind(std::string_view name);
std::string_view env_name(EnvKind kind);

struct EnvSpec {
  EnvKind kind = EnvKind::kReach;
  int horizon = 100;
  int robot_dim = 2;
  WorkspaceBox workspace;
  Coords home;
  // Uniform reset ranges for the randomized object parameters.
  WorkspaceBox reset_box;

  double grasp_radius = 0.05;
  double lift_height = 0.5;
  double drawer_travel = 0.3;

  int object_dim() const;
};

EnvSpec make_env_spec(EnvKind kind, int horizon);
inline EnvSpec make_env_spec(std::string_view name, int horizon) {
  return make_env_spec(parse_env_kind(name), horizon);
}

// Timestep budget per segment: floor(H/T) steps each, with the remainder of
// H appended to segment T. A snippet of i < T waypoints gets i * floor(H/T).
class ControllerConfig {
 public:
  ControllerConfig(int horizon, int waypoint_count);

  int horizon() const { return horizon_; }
  int waypoint_count() const { return waypoint_count_; }
  int steps_per_segment() const { return horizon_ / waypoint_count_; }
  std::vector<int> segment_steps(int segments) const;

 private:
  int horizon_;
  int waypoint_count_;
};

WorldState reset(const EnvSpec& spec, std::uint64_t seed);

// One timestep. The commanded robot state is projected onto the feasible set
// before the object update; see env.cpp for the contact rules.
WorldState step(const WorldState& state, const Waypoint& command, const EnvSpec& spec);

double reward(const WorldState& state, const EnvSpec& spec);

struct RolloutResult {
  StateTrace trace;
  double total_reward = 0.0;
};

// tau = g(s^0, xi): linear interpolation toward each waypoint in turn, one
// `step` per timestep. The trace holds 1 + sum(segment_steps) states.
RolloutResult rollout(const WorldState& start, const Trajectory& trajectory, const EnvSpec& spec,
                      const ControllerConfig& controller);

// Same total as `rollout` without materializing the trace.
double rollout_reward(const WorldState& start, const Trajectory& trajectory, const EnvSpec& spec,
                      const ControllerConfig& controller);

// Reset-state features fed to the reward models: robot home then objects.
Vec state_features(const WorldState& state);
// Range of every feature over all reset states, for input scaling.
WorkspaceBox feature_box(const EnvSpec& spec);

struct OracleResult {
  double reward = 0.0;
  Trajectory trajectory;
};

// Best-case trajectory reward R(tau*) stand-in for `segments` waypoints.
// reach: exhaustive grid over waypoint 1 at `resolution` per axis, then
// pattern-search refinement of the best nodes; later waypoints sit on the
// target. lift/drawer: scripted waypoints refined one waypoint at a time by
// an 11-per-axis grid over +-0.05.
OracleResult oracle_solution(const WorldState& start, const EnvSpec& spec,
                             const ControllerConfig& controller, int segments,
                             int resolution = 101);
inline double oracle_reward(const WorldState& start, const EnvSpec& spec,
                            const ControllerConfig& controller, int segments,
                            int resolution = 101) {
  return oracle_solution(start, spec, controller, segments, resolution).reward;
}

// The scripted trajectory for lift and drawer (before refinement).
Trajectory scripted_trajectory(const WorldState& start, const EnvSpec& spec, int segments);

}  // namespace wpb

#endif  // WPB_ENV_HPP_
