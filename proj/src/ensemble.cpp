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

#include "wpb/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wpb/csv_io.hpp"
#include "wpb/env.hpp"

namespace wpb {
namespace {

// Floor for the reward scale so a near-constant dataset does not blow up the
// regression targets.
constexpr double kMinTargetScale = 1e-3;

}  // namespace

Vec model_input(const WorldState& start, const Trajectory& trajectory) {
  const Vec f = state_features(start);
  const Vec w = trajectory.flatten();
  Vec x(f.size() + w.size());
  x << f, w;
  return x;
}

Ensemble::Ensemble(int mab_index, int arm_waypoints, int members, int hidden_dim,
                   Standardizer input_scaling, std::uint64_t seed, double learning_rate)
    : mab_index_(mab_index), arm_waypoints_(arm_waypoints), scaling_(std::move(input_scaling)) {
  if (members < 1) throw std::invalid_argument("ensemble needs at least one member");
  const int input_dim = static_cast<int>(scaling_.input_offset.size());
  members_.reserve(members);
  for (int n = 0; n < members; ++n) {
    NetworkParams p = init_network(input_dim, hidden_dim,
                                   derive_seed(seed, Stream::kMemberInit, static_cast<unsigned>(n)));
    AdamState adam(p.size(), learning_rate);
    members_.push_back({std::move(p), std::move(adam)});
  }
}

Ensemble::Ensemble(int mab_index, int arm_waypoints, std::vector<NetworkParams> members,
                   Standardizer scaling)
    : mab_index_(mab_index), arm_waypoints_(arm_waypoints), frozen_(true),
      scaling_(std::move(scaling)) {
  if (members.empty()) throw std::invalid_argument("ensemble needs at least one member");
  for (auto& p : members) {
    if (p.input_dim() != input_dim()) {
      throw std::invalid_argument("ensemble member input dimension mismatch");
    }
    AdamState adam(p.size());
    members_.push_back({std::move(p), std::move(adam)});
  }
}

double Ensemble::predict(int member, const Eigen::Ref<const Vec>& input, Vec* grad) const {
  const Vec x = scaling_.to_net(input);
  const double y = value_and_grad_input(members_.at(member).params, x, grad);
  if (grad) *grad = (scaling_.target_scale * grad->array() / scaling_.input_scale.array()).matrix();
  return scaling_.net_to_reward(y);
}

double Ensemble::predict_mean(const Eigen::Ref<const Vec>& input, Vec* grad) const {
  const Vec x = scaling_.to_net(input);
  double sum = 0.0;
  Vec g, gsum;
  if (grad) gsum = Vec::Zero(x.size());
  for (const auto& m : members_) {
    sum += value_and_grad_input(m.params, x, grad ? &g : nullptr);
    if (grad) gsum += g;
  }
  const double inv_n = 1.0 / static_cast<double>(members_.size());
  if (grad) {
    *grad = (scaling_.target_scale * inv_n * gsum.array() / scaling_.input_scale.array()).matrix();
  }
  return scaling_.net_to_reward(sum * inv_n);
}

int Ensemble::sample_member(Rng& rng) const {
  return static_cast<int>(rng.below(members_.size()));
}

void Ensemble::update(const Dataset& dataset, const UpdateConfig& config, Rng& rng) {
  if (frozen_) throw std::logic_error("update on a frozen ensemble");
  if (dataset.empty()) throw std::invalid_argument("update needs a non-empty dataset");
  if (config.epochs < 0 || config.batch_size < 1) {
    throw std::invalid_argument("update: epochs must be >= 0 and batch_size >= 1");
  }
  if (config.epochs == 0) return;

  const auto n = static_cast<Eigen::Index>(dataset.size());
  Vec rewards(n);
  for (Eigen::Index k = 0; k < n; ++k) rewards[k] = dataset[k].total_reward;
  const double mean = rewards.mean();
  const double var = (rewards.array() - mean).square().mean();
  scaling_.target_mean = mean;
  scaling_.target_scale = std::max(std::sqrt(var), kMinTargetScale);

  Eigen::MatrixXd inputs(input_dim(), n);
  Vec targets(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    inputs.col(k) = scaling_.to_net(model_input(dataset[k].start, dataset[k].trajectory));
    targets[k] = scaling_.reward_to_net(rewards[k]);
  }

  const Eigen::Index batch = std::min<Eigen::Index>(config.batch_size, n);
  const Eigen::Index batches = (n + batch - 1) / batch;
  std::vector<std::uint64_t> member_seeds(members_.size());
  for (auto& s : member_seeds) s = rng.next();

  Eigen::MatrixXd xb(input_dim(), batch);
  Vec tb(batch), grad;
  for (std::size_t m = 0; m < members_.size(); ++m) {
    Rng member_rng(member_seeds[m]);
    auto& member = members_[m];
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      for (Eigen::Index b = 0; b < batches; ++b) {
        for (Eigen::Index k = 0; k < batch; ++k) {
          const auto idx = static_cast<Eigen::Index>(member_rng.below(static_cast<std::uint64_t>(n)));
          xb.col(k) = inputs.col(idx);
          tb[k] = targets[idx];
        }
        mse_loss_and_grad(member.params, xb, tb, grad);
        adam_step(member.params, grad, member.adam);
      }
    }
  }
}

int FrozenBuffer::waypoint_count() const {
  int total = 0;
  for (const auto& e : ensembles_) total += e.arm_waypoints();
  return total;
}

void FrozenBuffer::freeze(Ensemble ensemble) {
  if (ensemble.mab_index() != static_cast<int>(ensembles_.size()) + 1) {
    throw std::invalid_argument("freeze: ensemble for bandit " +
                                std::to_string(ensemble.mab_index()) + " cannot follow " +
                                std::to_string(ensembles_.size()) + " frozen bandits");
  }
  ensemble.freeze();
  ensembles_.push_back(std::move(ensemble));
}

void save_frozen_buffer(const FrozenBuffer& buffer, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  manifest << "wpb-frozen-buffer 1\n";
  manifest << "ensembles " << buffer.size() << '\n';
  for (const auto& e : buffer.ensembles()) {
    const std::string file = "mab_" + std::to_string(e.mab_index()) + ".ckpt";
    std::ostringstream body;
    body << "wpb-ensemble 1\n";
    body << "members " << e.size() << '\n';
    for (const auto& m : e.members()) write_checkpoint(body, m.params, e.scaling());
    write_file_atomic(dir / file, body.str());
    manifest << "ensemble " << e.mab_index() << ' ' << e.arm_waypoints() << ' ' << e.size() << ' '
             << file << '\n';
  }
  write_file_atomic(dir / "manifest.txt", manifest.str());
}

FrozenBuffer load_frozen_buffer(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) throw std::runtime_error("no frozen buffer at " + dir.string());
  std::string magic, key;
  int version = 0;
  std::size_t count = 0;
  if (!(manifest >> magic >> version) || magic != "wpb-frozen-buffer" || version != 1) {
    throw std::runtime_error("frozen buffer manifest has an unsupported header");
  }
  if (!(manifest >> key >> count) || key != "ensembles") {
    throw std::runtime_error("frozen buffer manifest: missing ensemble count");
  }
  FrozenBuffer buffer;
  for (std::size_t j = 0; j < count; ++j) {
    int mab = 0, arm = 0, members = 0;
    std::string file;
    if (!(manifest >> key >> mab >> arm >> members >> file) || key != "ensemble") {
      throw std::runtime_error("frozen buffer manifest: bad ensemble line");
    }
    std::ifstream in(dir / file);
    if (!in) throw std::runtime_error("missing checkpoint " + (dir / file).string());
    int n = 0, v = 0;
    if (!(in >> magic >> v) || magic != "wpb-ensemble" || v != 1 || !(in >> key >> n) ||
        key != "members" || n != members) {
      throw std::runtime_error("checkpoint " + file + " has a bad header");
    }
    std::vector<NetworkParams> params(members);
    Standardizer scaling;
    for (auto& p : params) read_checkpoint(in, p, scaling);
    buffer.freeze(Ensemble(mab, arm, std::move(params), std::move(scaling)));
  }
  return buffer;
}

}  // namespace wpb
