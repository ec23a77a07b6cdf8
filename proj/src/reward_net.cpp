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

#include "wpb/reward_net.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "wpb/rng.hpp"

namespace wpb {
namespace {

using Eigen::MatrixXd;

inline double leaky(double z) { return z > 0.0 ? z : kLeakySlope * z; }
inline double leaky_slope(double z) { return z > 0.0 ? 1.0 : kLeakySlope; }

void check_input(const NetworkParams& params, Eigen::Index n) {
  if (n != params.input_dim()) {
    throw std::invalid_argument("reward net: input has " + std::to_string(n) +
                                " entries, expected " + std::to_string(params.input_dim()));
  }
}

// Pre-activations kept for backprop.
struct Activations {
  MatrixXd z1, a1, z2, a2;
  Eigen::RowVectorXd out;
};

Activations run_forward(const NetworkParams& p, const Eigen::Ref<const MatrixXd>& x) {
  Activations act;
  act.z1 = (p.w1() * x).colwise() + p.b1();
  act.a1 = act.z1.unaryExpr(&leaky);
  act.z2 = (p.w2() * act.a1).colwise() + p.b2();
  act.a2 = act.z2.unaryExpr(&leaky);
  act.out = (p.w3().transpose() * act.a2).array() + p.b3();
  return act;
}

double parse_real(const std::string& token) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::runtime_error("checkpoint: bad number '" + token + "'");
  }
  return v;
}

void write_tensor(std::ostream& out, const char* name, const Eigen::Ref<const MatrixXd>& m) {
  out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_real(m(r, c));
    }
    out << '\n';
  }
}

MatrixXd read_tensor(std::istream& in, const std::string& expected, Eigen::Index rows,
                     Eigen::Index cols) {
  std::string tag, name;
  Eigen::Index r = 0, c = 0;
  if (!(in >> tag >> name >> r >> c) || tag != "tensor") {
    throw std::runtime_error("checkpoint: expected tensor header for " + expected);
  }
  if (name != expected || r != rows || c != cols) {
    throw std::runtime_error("checkpoint: tensor " + name + " " + std::to_string(r) + "x" +
                             std::to_string(c) + " does not match expected " + expected);
  }
  MatrixXd m(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> token)) throw std::runtime_error("checkpoint: truncated tensor " + name);
      m(i, j) = parse_real(token);
    }
  }
  return m;
}

}  // namespace

NetworkParams::NetworkParams(int input_dim, int hidden_dim)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("reward net: dimensions must be positive");
  }
  flat_ = Vec::Zero(param_count(input_dim, hidden_dim));
}

Eigen::Index NetworkParams::param_count(int input_dim, int hidden_dim) {
  const Eigen::Index h = hidden_dim;
  return h * input_dim + h + h * h + h + h + 1;
}

NetworkParams::ConstMatMap NetworkParams::w1() const {
  return ConstMatMap(flat_.data(), hidden_dim_, input_dim_);
}
NetworkParams::ConstVecMap NetworkParams::b1() const {
  return ConstVecMap(flat_.data() + off_b1(), hidden_dim_);
}
NetworkParams::ConstMatMap NetworkParams::w2() const {
  return ConstMatMap(flat_.data() + off_w2(), hidden_dim_, hidden_dim_);
}
NetworkParams::ConstVecMap NetworkParams::b2() const {
  return ConstVecMap(flat_.data() + off_b2(), hidden_dim_);
}
NetworkParams::ConstVecMap NetworkParams::w3() const {
  return ConstVecMap(flat_.data() + off_w3(), hidden_dim_);
}
NetworkParams::MatMap NetworkParams::w1() { return MatMap(flat_.data(), hidden_dim_, input_dim_); }
NetworkParams::VecMap NetworkParams::b1() { return VecMap(flat_.data() + off_b1(), hidden_dim_); }
NetworkParams::MatMap NetworkParams::w2() {
  return MatMap(flat_.data() + off_w2(), hidden_dim_, hidden_dim_);
}
NetworkParams::VecMap NetworkParams::b2() { return VecMap(flat_.data() + off_b2(), hidden_dim_); }
NetworkParams::VecMap NetworkParams::w3() { return VecMap(flat_.data() + off_w3(), hidden_dim_); }

bool NetworkParams::operator==(const NetworkParams& other) const {
  return input_dim_ == other.input_dim_ && hidden_dim_ == other.hidden_dim_ &&
         flat_ == other.flat_;
}

NetworkParams init_network(int input_dim, int hidden_dim, std::uint64_t seed) {
  NetworkParams p(input_dim, hidden_dim);
  Rng rng(seed);
  const double gain = std::sqrt(2.0 / (1.0 + kLeakySlope * kLeakySlope));
  auto fill = [&](auto&& m, double bound) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
    }
  };
  fill(p.w1(), gain * std::sqrt(3.0 / input_dim));
  fill(p.w2(), gain * std::sqrt(3.0 / hidden_dim));
  fill(p.w3(), std::sqrt(3.0 / hidden_dim));
  return p;
}

double forward(const NetworkParams& params, const Eigen::Ref<const Vec>& input) {
  check_input(params, input.size());
  return value_and_grad_input(params, input, nullptr);
}

Vec forward_batch(const NetworkParams& params, const Eigen::Ref<const MatrixXd>& inputs) {
  check_input(params, inputs.rows());
  return run_forward(params, inputs).out.transpose();
}

double mse_loss_and_grad(const NetworkParams& params, const Eigen::Ref<const MatrixXd>& inputs,
                         const Eigen::Ref<const Vec>& targets, Vec& grad) {
  check_input(params, inputs.rows());
  if (targets.size() != inputs.cols() || inputs.cols() == 0) {
    throw std::invalid_argument("reward net: batch and target sizes differ");
  }
  const double inv_b = 1.0 / static_cast<double>(inputs.cols());
  const Activations act = run_forward(params, inputs);
  const Eigen::RowVectorXd err = act.out - targets.transpose();
  const double loss = 0.5 * err.squaredNorm() * inv_b;

  NetworkParams g(params.input_dim(), params.hidden_dim());
  const Eigen::RowVectorXd d_out = err * inv_b;
  g.w3() = act.a2 * d_out.transpose();
  g.b3() = d_out.sum();
  const MatrixXd d_z2 =
      (params.w3() * d_out).cwiseProduct(act.z2.unaryExpr(&leaky_slope));
  g.w2() = d_z2 * act.a1.transpose();
  g.b2() = d_z2.rowwise().sum();
  const MatrixXd d_z1 =
      (params.w2().transpose() * d_z2).cwiseProduct(act.z1.unaryExpr(&leaky_slope));
  g.w1() = d_z1 * inputs.transpose();
  g.b1() = d_z1.rowwise().sum();
  grad = std::move(g.flat());
  return loss;
}

Vec grad_params(const NetworkParams& params, const Eigen::Ref<const Vec>& input, double target) {
  Vec grad;
  Vec t(1);
  t[0] = target;
  mse_loss_and_grad(params, input, t, grad);
  return grad;
}

double value_and_grad_input(const NetworkParams& params, const Eigen::Ref<const Vec>& input,
                            Vec* grad) {
  check_input(params, input.size());
  const Vec z1 = params.w1() * input + params.b1();
  const Vec a1 = z1.unaryExpr(&leaky);
  const Vec z2 = params.w2() * a1 + params.b2();
  const Vec a2 = z2.unaryExpr(&leaky);
  const double out = params.w3().dot(a2) + params.b3();
  if (grad) {
    const Vec d_z2 = params.w3().cwiseProduct(z2.unaryExpr(&leaky_slope));
    const Vec d_z1 = (params.w2().transpose() * d_z2).cwiseProduct(z1.unaryExpr(&leaky_slope));
    *grad = params.w1().transpose() * d_z1;
  }
  return out;
}

Vec grad_input(const NetworkParams& params, const Eigen::Ref<const Vec>& input) {
  Vec g;
  value_and_grad_input(params, input, &g);
  return g;
}

void adam_step(NetworkParams& params, const Eigen::Ref<const Vec>& grad, AdamState& state) {
  if (grad.size() != params.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.step;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  params.flat().array() -= state.learning_rate * (state.first_moment.array() / c1) /
                           ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

Standardizer Standardizer::identity(int input_dim) {
  return {Vec::Zero(input_dim), Vec::Ones(input_dim), 0.0, 1.0};
}

Standardizer Standardizer::from_box(const WorkspaceBox& box) {
  return {0.5 * (box.lo + box.hi), 0.5 * (box.hi - box.lo), 0.0, 1.0};
}

Vec Standardizer::to_net(const Eigen::Ref<const Vec>& x) const {
  if (x.size() != input_offset.size()) {
    throw std::invalid_argument("standardizer: input has wrong length");
  }
  return (x - input_offset).cwiseQuotient(input_scale);
}

bool Standardizer::operator==(const Standardizer& other) const {
  return input_offset.size() == other.input_offset.size() &&
         input_offset == other.input_offset && input_scale == other.input_scale &&
         target_mean == other.target_mean && target_scale == other.target_scale;
}

void write_checkpoint(std::ostream& out, const NetworkParams& params,
                      const Standardizer& scaling) {
  out << "wpb-reward-net 1\n";
  out << "input_dim " << params.input_dim() << '\n';
  out << "hidden_dim " << params.hidden_dim() << '\n';
  write_tensor(out, "input_offset", scaling.input_offset);
  write_tensor(out, "input_scale", scaling.input_scale);
  write_tensor(out, "target_mean", MatrixXd::Constant(1, 1, scaling.target_mean));
  write_tensor(out, "target_scale", MatrixXd::Constant(1, 1, scaling.target_scale));
  write_tensor(out, "layer1.weight", params.w1());
  write_tensor(out, "layer1.bias", params.b1());
  write_tensor(out, "layer2.weight", params.w2());
  write_tensor(out, "layer2.bias", params.b2());
  write_tensor(out, "layer3.weight", params.w3().transpose());
  write_tensor(out, "layer3.bias", MatrixXd::Constant(1, 1, params.b3()));
  out << "end\n";
}

void read_checkpoint(std::istream& in, NetworkParams& params, Standardizer& scaling) {
  std::string magic, key;
  int version = 0, input_dim = 0, hidden_dim = 0;
  if (!(in >> magic >> version) || magic != "wpb-reward-net") {
    throw std::runtime_error("checkpoint: missing wpb-reward-net header");
  }
  if (version != 1) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  if (!(in >> key >> input_dim) || key != "input_dim" || input_dim < 1) {
    throw std::runtime_error("checkpoint: bad input_dim");
  }
  if (!(in >> key >> hidden_dim) || key != "hidden_dim" || hidden_dim < 1) {
    throw std::runtime_error("checkpoint: bad hidden_dim");
  }
  Standardizer s;
  s.input_offset = read_tensor(in, "input_offset", input_dim, 1);
  s.input_scale = read_tensor(in, "input_scale", input_dim, 1);
  s.target_mean = read_tensor(in, "target_mean", 1, 1)(0, 0);
  s.target_scale = read_tensor(in, "target_scale", 1, 1)(0, 0);
  NetworkParams p(input_dim, hidden_dim);
  p.w1() = read_tensor(in, "layer1.weight", hidden_dim, input_dim);
  p.b1() = read_tensor(in, "layer1.bias", hidden_dim, 1);
  p.w2() = read_tensor(in, "layer2.weight", hidden_dim, hidden_dim);
  p.b2() = read_tensor(in, "layer2.bias", hidden_dim, 1);
  p.w3() = read_tensor(in, "layer3.weight", 1, hidden_dim).transpose();
  p.b3() = read_tensor(in, "layer3.bias", 1, 1)(0, 0);
  if (!(in >> key) || key != "end") throw std::runtime_error("checkpoint: missing end marker");
  if (!p.flat().allFinite()) throw std::runtime_error("checkpoint: non-finite parameter");
  params = std::move(p);
  scaling = std::move(s);
}

}  // namespace wpb
