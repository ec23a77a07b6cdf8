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

#ifndef WPB_ENSEMBLE_HPP_
#define WPB_ENSEMBLE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wpb/core.hpp"
#include "wpb/reward_net.hpp"
#include "wpb/rng.hpp"

namespace wpb {

// Reward-model input for a reset state and a (partial) trajectory:
// state_features(s0) followed by the flattened waypoints.
Vec model_input(const WorldState& start, const Trajectory& trajectory);

struct EnsembleMember {
  NetworkParams params;
  AdamState adam;
};

struct UpdateConfig {
  int epochs = 10;
  int batch_size = 32;
};

// N independently initialized reward models standing in for the posterior over
// the reward parameters of one bandit. `arm_waypoints` is how many waypoints
// the bandit chooses (1 for the sequential learner, T for the joint baseline).
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(int mab_index, int arm_waypoints, int members, int hidden_dim,
           Standardizer input_scaling, std::uint64_t seed, double learning_rate = 0.001);
  // Rebuilds a frozen ensemble from stored parameters.
  Ensemble(int mab_index, int arm_waypoints, std::vector<NetworkParams> members,
           Standardizer scaling);

  int mab_index() const { return mab_index_; }
  int arm_waypoints() const { return arm_waypoints_; }
  int size() const { return static_cast<int>(members_.size()); }
  int input_dim() const { return static_cast<int>(scaling_.input_offset.size()); }
  bool frozen() const { return frozen_; }
  const Standardizer& scaling() const { return scaling_; }
  const std::vector<EnsembleMember>& members() const { return members_; }

  // Member prediction on the reward scale; `grad` receives d/d(raw input).
  double predict(int member, const Eigen::Ref<const Vec>& input, Vec* grad = nullptr) const;
  // Average of the member predictions (and gradients).
  double predict_mean(const Eigen::Ref<const Vec>& input, Vec* grad = nullptr) const;

  // Uniform member index in [0, size()).
  int sample_member(Rng& rng) const;

  // Refits the target scaling to the dataset, then trains every member for
  // `epochs` passes of ceil(|D| / batch) minibatches drawn with replacement.
  // Throws std::logic_error when frozen, std::invalid_argument on empty data.
  void update(const Dataset& dataset, const UpdateConfig& config, Rng& rng);

  void freeze() { frozen_ = true; }

 private:
  int mab_index_ = 0;
  int arm_waypoints_ = 1;
  bool frozen_ = false;
  Standardizer scaling_;
  std::vector<EnsembleMember> members_;
};

// Frozen ensembles of bandits 1..i-1, in bandit order.
class FrozenBuffer {
 public:
  std::size_t size() const { return ensembles_.size(); }
  bool empty() const { return ensembles_.empty(); }
  const Ensemble& operator[](std::size_t j) const { return ensembles_[j]; }
  const std::vector<Ensemble>& ensembles() const { return ensembles_; }

  // Total waypoints produced by the buffer.
  int waypoint_count() const;

  // Freezes `ensemble` and appends it. Its mab_index must be size() + 1.
  void freeze(Ensemble ensemble);

 private:
  std::vector<Ensemble> ensembles_;
};

// Directory layout: manifest.txt plus one mab_<i>.ckpt per ensemble.
//   manifest.txt:  wpb-frozen-buffer 1
//                  ensembles <count>
//                  ensemble <mab_index> <arm_waypoints> <members> <file>
//   mab_<i>.ckpt:  wpb-ensemble 1
//                  members <N>
//                  <N reward-net checkpoints>
void save_frozen_buffer(const FrozenBuffer& buffer, const std::filesystem::path& dir);
FrozenBuffer load_frozen_buffer(const std::filesystem::path& dir);

}  // namespace wpb

#endif  // WPB_ENSEMBLE_HPP_
