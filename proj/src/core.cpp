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

#include "wpb/core.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace wpb {

WorkspaceBox::WorkspaceBox(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size()) {
    throw std::invalid_argument("WorkspaceBox: lo and hi differ in length");
  }
  for (int k = 0; k < lo.size(); ++k) {
    if (!(lo[k] < hi[k])) {
      throw std::invalid_argument("WorkspaceBox: requires lo < hi on axis " + std::to_string(k));
    }
  }
}

bool WorkspaceBox::contains(const Eigen::Ref<const Vec>& x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (int k = 0; k < x.size(); ++k) {
    if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
  }
  return true;
}

Vec WorkspaceBox::clamp(const Eigen::Ref<const Vec>& x) const {
  return x.cwiseMax(lo).cwiseMin(hi);
}

WorkspaceBox WorkspaceBox::tiled(int copies) const {
  Vec l(lo.size() * copies), h(hi.size() * copies);
  for (int c = 0; c < copies; ++c) {
    l.segment(c * lo.size(), lo.size()) = lo;
    h.segment(c * hi.size(), hi.size()) = hi;
  }
  return WorkspaceBox(std::move(l), std::move(h));
}

Waypoint::Waypoint(std::initializer_list<double> values) {
  if (values.size() > static_cast<std::size_t>(kMaxCoords)) {
    throw std::invalid_argument("Waypoint: too many coordinates");
  }
  coords.resize(static_cast<Eigen::Index>(values.size()));
  int k = 0;
  for (double v : values) coords[k++] = v;
}

bool Waypoint::operator==(const Waypoint& other) const {
  return coords.size() == other.coords.size() && coords == other.coords;
}

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {}

void Trajectory::append(Waypoint w) { waypoints_.push_back(std::move(w)); }

Trajectory Trajectory::prefix(std::size_t i) const {
  if (i < 1 || i > waypoints_.size()) {
    throw std::out_of_range("prefix: index " + std::to_string(i) + " outside [1, " +
                            std::to_string(waypoints_.size()) + "]");
  }
  return Trajectory(std::vector<Waypoint>(waypoints_.begin(), waypoints_.begin() + i));
}

Vec Trajectory::flatten() const {
  Eigen::Index n = 0;
  for (const auto& w : waypoints_) n += w.coords.size();
  Vec flat(n);
  Eigen::Index off = 0;
  for (const auto& w : waypoints_) {
    flat.segment(off, w.coords.size()) = w.coords;
    off += w.coords.size();
  }
  return flat;
}

Trajectory Trajectory::unflatten(const Eigen::Ref<const Vec>& flat, int robot_dim) {
  if (robot_dim <= 0 || flat.size() % robot_dim != 0) {
    throw std::invalid_argument("unflatten: length is not a multiple of the robot dimension");
  }
  std::vector<Waypoint> ws;
  for (Eigen::Index off = 0; off < flat.size(); off += robot_dim) {
    ws.emplace_back(Coords(flat.segment(off, robot_dim)));
  }
  return Trajectory(std::move(ws));
}

bool Trajectory::operator==(const Trajectory& other) const {
  return waypoints_ == other.waypoints_;
}

bool WorldState::operator==(const WorldState& other) const {
  return grasped == other.grasped && robot.size() == other.robot.size() &&
         objects.size() == other.objects.size() && robot == other.robot &&
         objects == other.objects;
}

void Dataset::append(EpisodeRecord record) {
  if (!std::isfinite(record.total_reward)) {
    throw std::invalid_argument("Dataset: total_reward must be finite");
  }
  if (!records_.empty() && records_.front().trajectory.size() != record.trajectory.size()) {
    throw std::invalid_argument("Dataset: trajectory length differs from existing records");
  }
  records_.push_back(std::move(record));
}

std::string format_real(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

}  // namespace wpb
