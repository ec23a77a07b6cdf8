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

#ifndef WPB_REWARD_NET_HPP_
#define WPB_REWARD_NET_HPP_

#include <cstdint>
#include <iosfwd>

#include <Eigen/Core>

#include "wpb/core.hpp"

namespace wpb {

inline constexpr double kLeakySlope = 0.01;

// Parameters of the reward regressor
//   input -> hidden (leaky ReLU) -> hidden (leaky ReLU) -> scalar.
// All tensors share one flat buffer so gradients and Adam moments are plain
// vectors of the same layout:
//   layer1.weight (hidden x input, column-major), layer1.bias,
//   layer2.weight (hidden x hidden),               layer2.bias,
//   layer3.weight (1 x hidden),                    layer3.bias (1).
class NetworkParams {
 public:
  using MatMap = Eigen::Map<Eigen::MatrixXd>;
  using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;
  using VecMap = Eigen::Map<Vec>;
  using ConstVecMap = Eigen::Map<const Vec>;

  NetworkParams() = default;
  // All-zero parameters.
  NetworkParams(int input_dim, int hidden_dim);

  static Eigen::Index param_count(int input_dim, int hidden_dim);

  int input_dim() const { return input_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  Eigen::Index size() const { return flat_.size(); }

  Vec& flat() { return flat_; }
  const Vec& flat() const { return flat_; }

  ConstMatMap w1() const;
  ConstVecMap b1() const;
  ConstMatMap w2() const;
  ConstVecMap b2() const;
  ConstVecMap w3() const;
  double b3() const { return flat_[flat_.size() - 1]; }

  MatMap w1();
  VecMap b1();
  MatMap w2();
  VecMap b2();
  VecMap w3();
  double& b3() { return flat_[flat_.size() - 1]; }

  bool operator==(const NetworkParams& other) const;

 private:
  Eigen::Index off_b1() const { return Eigen::Index(hidden_dim_) * input_dim_; }
  Eigen::Index off_w2() const { return off_b1() + hidden_dim_; }
  Eigen::Index off_b2() const { return off_w2() + Eigen::Index(hidden_dim_) * hidden_dim_; }
  Eigen::Index off_w3() const { return off_b2() + hidden_dim_; }

  int input_dim_ = 0;
  int hidden_dim_ = 0;
  Vec flat_;
};

// Kaiming-uniform weights (fan-in scaling, leaky-ReLU gain on hidden layers),
// zero biases. Deterministic in `seed`.
NetworkParams init_network(int input_dim, int hidden_dim, std::uint64_t seed);

// Throws std::invalid_argument on an input of the wrong length.
double forward(const NetworkParams& params, const Eigen::Ref<const Vec>& input);

// One prediction per column of `inputs`.
Vec forward_batch(const NetworkParams& params, const Eigen::Ref<const Eigen::MatrixXd>& inputs);

// Gradient of 0.5 * (forward - target)^2 with respect to the flat parameters.
Vec grad_params(const NetworkParams& params, const Eigen::Ref<const Vec>& input, double target);

// Mean over columns of 0.5 * (forward - target)^2; its parameter gradient is
// written to `grad` (resized as needed).
double mse_loss_and_grad(const NetworkParams& params,
                         const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                         const Eigen::Ref<const Vec>& targets, Vec& grad);

Vec grad_input(const NetworkParams& params, const Eigen::Ref<const Vec>& input);

// Forward value plus input gradient from a single pass.
double value_and_grad_input(const NetworkParams& params, const Eigen::Ref<const Vec>& input,
                            Vec* grad);

struct AdamState {
  Vec first_moment;
  Vec second_moment;
  std::int64_t step = 0;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState() = default;
  explicit AdamState(Eigen::Index n, double lr = 0.001)
      : first_moment(Vec::Zero(n)), second_moment(Vec::Zero(n)), learning_rate(lr) {}
};

// Bias-corrected Adam update in place.
void adam_step(NetworkParams& params, const Eigen::Ref<const Vec>& grad, AdamState& state);

// Affine maps between raw model inputs/targets and the network's scale:
//   net_input = (x - input_offset) / input_scale
//   reward    = target_mean + target_scale * net_output
struct Standardizer {
  Vec input_offset;
  Vec input_scale;
  double target_mean = 0.0;
  double target_scale = 1.0;

  static Standardizer identity(int input_dim);
  // Maps every coordinate of `box` onto [-1, 1].
  static Standardizer from_box(const WorkspaceBox& box);

  Vec to_net(const Eigen::Ref<const Vec>& x) const;
  double reward_to_net(double r) const { return (r - target_mean) / target_scale; }
  double net_to_reward(double y) const { return target_mean + target_scale * y; }

  bool operator==(const Standardizer& other) const;
};

// Checkpoint text format, version 1:
//   wpb-reward-net 1
//   input_dim <n>
//   hidden_dim <h>
//   tensor <name> <rows> <cols>
//   <rows*cols values, row-major, shortest round-trip decimal>
//   ...
//   end
// Tensors: input_offset, input_scale (n x 1), target_mean, target_scale (1 x 1),
// layer1.weight, layer1.bias, layer2.weight, layer2.bias, layer3.weight,
// layer3.bias.
void write_checkpoint(std::ostream& out, const NetworkParams& params, const Standardizer& scaling);
// Throws std::runtime_error on a malformed or unsupported checkpoint.
void read_checkpoint(std::istream& in, NetworkParams& params, Standardizer& scaling);

}  // namespace wpb

#endif  // WPB_REWARD_NET_HPP_
