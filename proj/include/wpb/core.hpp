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

#ifndef WPB_CORE_HPP_
#define WPB_CORE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wpb {

// Small coordinate vectors (robot state, object state) live on the stack.
inline constexpr int kMaxCoords = 4;
using Coords = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxCoords, 1>;

using Vec = Eigen::VectorXd;

// Axis-aligned box [lo, hi]. Used both for the robot workspace S_R and for the
// stacked search space of several waypoints.
struct WorkspaceBox {
  Vec lo;
  Vec hi;

  WorkspaceBox() = default;
  WorkspaceBox(Vec lo_, Vec hi_);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::Ref<const Vec>& x, double tol = 0.0) const;
  Vec clamp(const Eigen::Ref<const Vec>& x) const;

  // The box repeated `copies` times along the coordinate axis.
  WorkspaceBox tiled(int copies) const;
};

// Target robot state s_R the controller interpolates toward.
struct Waypoint {
  Coords coords;

  Waypoint() = default;
  explicit Waypoint(Coords c) : coords(std::move(c)) {}
  Waypoint(std::initializer_list<double> values);

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int k) const { return coords[k]; }
  bool operator==(const Waypoint& other) const;
};

// Ordered waypoint sequence xi. Index 0 holds waypoint 1; s^0 is never stored.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Waypoint> waypoints);

  std::size_t size() const { return waypoints_.size(); }
  bool empty() const { return waypoints_.empty(); }
  const Waypoint& operator[](std::size_t k) const { return waypoints_[k]; }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

  void append(Waypoint w);

  // Snippet xi_i made of the first i waypoints. Throws std::out_of_range
  // unless 1 <= i <= size().
  Trajectory prefix(std::size_t i) const;

  // All coordinates concatenated, waypoint-major.
  Vec flatten() const;
  static Trajectory unflatten(const Eigen::Ref<const Vec>& flat, int robot_dim);

  bool operator==(const Trajectory& other) const;

 private:
  std::vector<Waypoint> waypoints_;
};

// Full world state s: robot state, environment object vector and a grasp flag.
struct WorldState {
  Coords robot;
  Coords objects;
  bool grasped = false;

  bool operator==(const WorldState& other) const;
};

// tau = {s^0, ..., s^H}.
struct StateTrace {
  std::vector<WorldState> states;

  std::size_t size() const { return states.size(); }
};

struct EpisodeRecord {
  WorldState start;
  Trajectory trajectory;
  double total_reward = 0.0;
};

// Append-only regression data for one bandit. All trajectories have equal length.
class Dataset {
 public:
  void append(EpisodeRecord record);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const EpisodeRecord& operator[](std::size_t k) const { return records_[k]; }
  const std::vector<EpisodeRecord>& records() const { return records_; }

 private:
  std::vector<EpisodeRecord> records_;
};

// R(tau) = sum of the per-state reward over every state in the trace.
template <typename RewardFn>
double total_reward(const StateTrace& trace, RewardFn&& reward_fn) {
  double sum = 0.0;
  for (const auto& s : trace.states) sum += reward_fn(s);
  return sum;
}

// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

}  // namespace wpb

#endif  // WPB_CORE_HPP_
