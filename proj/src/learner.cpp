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

#include "wpb/learner.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "wpb/rng.hpp"

namespace wpb {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Standardizer input_scaling(const EnvSpec& spec, int waypoint_inputs) {
  const WorkspaceBox features = feature_box(spec);
  const WorkspaceBox arms = spec.workspace.tiled(waypoint_inputs);
  Vec lo(features.dim() + arms.dim()), hi(features.dim() + arms.dim());
  lo << features.lo, arms.lo;
  hi << features.hi, arms.hi;
  return Standardizer::from_box(WorkspaceBox(lo, hi));
}

// Objective over the next `arm` coordinates appended to `fixed_input`.
template <typename Predict>
Objective arm_objective(const Vec& fixed_input, Eigen::Index arm, Predict predict) {
  return [fixed_input, arm, predict](const Vec& x, Vec* grad) {
    Vec input(fixed_input.size() + arm);
    input << fixed_input, x;
    if (!grad) return predict(input, nullptr);
    Vec full;
    const double v = predict(input, &full);
    *grad = full.tail(arm);
    return v;
  };
}

EpisodeRow make_row(const ExperimentConfig& config, int episode, int mab_index) {
  EpisodeRow row;
  row.run_id = config.run_id;
  row.seed = config.seed;
  row.algorithm = config.algorithm;
  row.env = config.env;
  row.episode = episode;
  row.mab_index = mab_index;
  return row;
}

void emit(TrainingRun& run, RegretTracker& regret, EpisodeRow row, const LearnerHooks& hooks) {
  row.cum_regret = regret.record(row.episode, row.oracle_reward, row.total_reward);
  if (hooks.on_episode) hooks.on_episode(row);
  run.log.push_back(std::move(row));
}

// One bandit whose arm is `arm_waypoints` waypoints appended after the
// prefix planned from `frozen`. Shared by the sequential and joint learners.
void run_bandit(const ExperimentConfig& config, int mab_index, int arm_waypoints,
                int& episode, TrainingRun& run, RegretTracker& regret,
                const LearnerHooks& hooks) {
  const EnvSpec spec = config.env_spec();
  const ControllerConfig controller = config.controller();
  const int prefix_waypoints = run.frozen.waypoint_count();
  const int segments = prefix_waypoints + arm_waypoints;
  const WorkspaceBox arm_box = spec.workspace.tiled(arm_waypoints);

  Ensemble live(mab_index, arm_waypoints, config.ensemble_size, config.hidden_dim,
                input_scaling(spec, segments),
                derive_seed(config.seed, Stream::kMemberInit, static_cast<unsigned>(mab_index)),
                config.learning_rate);
  Dataset dataset;
  std::optional<Vec> best_arm;
  double best_reward = -INFINITY;

  if (hooks.on_mab_start) hooks.on_mab_start(mab_index, run.frozen);
  for (int k = 0; k < config.episodes_per_mab; ++k) {
    ++episode;
    const auto t0 = Clock::now();
    const auto e = static_cast<std::uint64_t>(episode);
    const WorldState start = reset(spec, derive_seed(config.seed, Stream::kReset, e));

    Trajectory trajectory = plan_with_frozen(
        run.frozen, start, spec, config.search,
        derive_seed(config.seed, Stream::kPrefixSearch, e));

    Rng sample_rng(derive_seed(config.seed, Stream::kMemberSample, e));
    const int member = live.sample_member(sample_rng);
    const Objective objective =
        arm_objective(model_input(start, trajectory), arm_box.dim(),
                      [&live, member](const Vec& in, Vec* g) { return live.predict(member, in, g); });
    Rng search_rng(derive_seed(config.seed, Stream::kSearch, e));
    const SearchResult arm = maximize(objective, arm_box, config.search, best_arm, search_rng);
    const Trajectory chosen = Trajectory::unflatten(arm.point, spec.robot_dim);
    for (const auto& w : chosen.waypoints()) trajectory.append(w);

    const double reward = rollout_reward(start, trajectory, spec, controller);
    if (reward > best_reward) {
      best_reward = reward;
      best_arm = arm.point;
    }
    dataset.append({start, trajectory, reward});
    Rng update_rng(derive_seed(config.seed, Stream::kUpdate, e));
    live.update(dataset, config.update, update_rng);

    EpisodeRow row = make_row(config, episode, mab_index);
    row.total_reward = reward;
    row.oracle_reward = oracle_reward(start, spec, controller, segments, config.oracle_resolution);
    row.waypoints = std::move(trajectory);
    row.wall_ms = elapsed_ms(t0);
    emit(run, regret, std::move(row), hooks);
  }
  run.frozen.freeze(std::move(live));
  if (hooks.on_mab_end) hooks.on_mab_end(mab_index, run.frozen);
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "sequential") return Algorithm::kSequential;
  if (name == "joint") return Algorithm::kJoint;
  if (name == "random") return Algorithm::kRandom;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected sequential, joint or random)");
}

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kSequential:
      return "sequential";
    case Algorithm::kJoint:
      return "joint";
    case Algorithm::kRandom:
      return "random";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (horizon < 2) throw ConfigError("H must be at least 2");
  if (waypoints < 1) throw ConfigError("T must be positive");
  if (waypoints >= horizon) {
    throw ConfigError("T must be smaller than H (got T = " + std::to_string(waypoints) +
                      ", H = " + std::to_string(horizon) + ")");
  }
  if (episodes_per_mab < 1) throw ConfigError("episodes_per_mab must be positive");
  if (ensemble_size < 1) throw ConfigError("N must be positive");
  if (hidden_dim < 1) throw ConfigError("hidden must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (update.epochs < 0) throw ConfigError("epochs must be non-negative");
  if (update.batch_size < 1) throw ConfigError("batch_size must be positive");
  if (oracle_resolution < 2) throw ConfigError("oracle_resolution must be at least 2");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be positive");
  if (oracle_resets < 1) throw ConfigError("oracle_resets must be positive");
  if (run_id.empty() || run_id.find_first_of(",\n\r") != std::string::npos) {
    throw ConfigError("run_id must be non-empty and contain no commas or newlines");
  }
  try {
    search.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

double RegretTracker::record(int episode, double oracle_reward, double reward) {
  const double cum = cumulative() + (oracle_reward - reward);
  entries_.push_back({episode, oracle_reward, reward, cum});
  return cum;
}

Trajectory plan_with_frozen(const FrozenBuffer& buffer, const WorldState& start,
                            const EnvSpec& spec, const SearchConfig& search, std::uint64_t seed) {
  Trajectory trajectory;
  for (std::size_t j = 0; j < buffer.size(); ++j) {
    const Ensemble& frozen = buffer[j];
    const WorkspaceBox box = spec.workspace.tiled(frozen.arm_waypoints());
    const Objective objective =
        arm_objective(model_input(start, trajectory), box.dim(),
                      [&frozen](const Vec& in, Vec* g) { return frozen.predict_mean(in, g); });
    Rng rng(mix64(seed + j));
    const SearchResult best = maximize(objective, box, search, std::nullopt, rng);
    const Trajectory chosen = Trajectory::unflatten(best.point, spec.robot_dim);
    for (const auto& w : chosen.waypoints()) trajectory.append(w);
  }
  return trajectory;
}

TrainingRun run_sequential(const ExperimentConfig& config, const LearnerHooks& hooks) {
  config.validate();
  TrainingRun run;
  run.search_dim = config.env_spec().robot_dim;
  RegretTracker regret;
  int episode = 0;
  for (int i = 1; i <= config.waypoints; ++i) {
    run_bandit(config, i, 1, episode, run, regret, hooks);
  }
  return run;
}

TrainingRun run_joint(const ExperimentConfig& config, const LearnerHooks& hooks) {
  config.validate();
  ExperimentConfig joint = config;
  joint.episodes_per_mab = config.total_episodes();
  TrainingRun run;
  run.search_dim = config.waypoints * config.env_spec().robot_dim;
  RegretTracker regret;
  int episode = 0;
  run_bandit(joint, 1, config.waypoints, episode, run, regret, hooks);
  return run;
}

TrainingRun run_random(const ExperimentConfig& config, const LearnerHooks& hooks) {
  config.validate();
  const EnvSpec spec = config.env_spec();
  const ControllerConfig controller = config.controller();
  TrainingRun run;
  run.search_dim = config.waypoints * spec.robot_dim;
  RegretTracker regret;
  for (int episode = 1; episode <= config.total_episodes(); ++episode) {
    const auto t0 = Clock::now();
    const auto e = static_cast<std::uint64_t>(episode);
    const WorldState start = reset(spec, derive_seed(config.seed, Stream::kReset, e));
    Rng rng(derive_seed(config.seed, Stream::kRandomArm, e));
    Trajectory trajectory;
    for (int j = 0; j < config.waypoints; ++j) {
      Coords w(spec.robot_dim);
      for (int k = 0; k < spec.robot_dim; ++k) {
        w[k] = rng.uniform(spec.workspace.lo[k], spec.workspace.hi[k]);
      }
      trajectory.append(Waypoint(w));
    }
    EpisodeRow row = make_row(config, episode, 0);
    row.total_reward = rollout_reward(start, trajectory, spec, controller);
    row.oracle_reward =
        oracle_reward(start, spec, controller, config.waypoints, config.oracle_resolution);
    row.waypoints = std::move(trajectory);
    row.wall_ms = elapsed_ms(t0);
    emit(run, regret, std::move(row), hooks);
  }
  return run;
}

TrainingRun train(const ExperimentConfig& config, const LearnerHooks& hooks) {
  switch (config.algorithm) {
    case Algorithm::kSequential:
      return run_sequential(config, hooks);
    case Algorithm::kJoint:
      return run_joint(config, hooks);
    case Algorithm::kRandom:
      return run_random(config, hooks);
  }
  throw ConfigError("unknown algorithm");
}

EvalSummary summarize_rewards(std::vector<double> rewards) {
  EvalSummary s;
  s.rewards = std::move(rewards);
  if (s.rewards.empty()) return s;
  const double n = static_cast<double>(s.rewards.size());
  double sum = 0.0;
  for (double r : s.rewards) sum += r;
  s.mean = sum / n;
  double ss = 0.0;
  for (double r : s.rewards) ss += (r - s.mean) * (r - s.mean);
  s.std_error = std::sqrt(ss / n) / std::sqrt(n);
  return s;
}

EvalSummary evaluate(const FrozenBuffer& buffer, const ExperimentConfig& config, int episodes) {
  config.validate();
  if (episodes < 1) throw std::invalid_argument("evaluate needs at least one episode");
  if (buffer.empty()) throw std::runtime_error("evaluate: no frozen reward models");
  if (buffer.waypoint_count() != config.waypoints) {
    throw std::runtime_error("evaluate: frozen models produce " +
                             std::to_string(buffer.waypoint_count()) + " waypoints, config has T = " +
                             std::to_string(config.waypoints));
  }
  const EnvSpec spec = config.env_spec();
  if (buffer[0].input_dim() != spec.robot_dim + spec.object_dim() +
                                   buffer[0].arm_waypoints() * spec.robot_dim) {
    throw std::runtime_error("evaluate: frozen models do not match environment " +
                             std::string(env_name(spec.kind)));
  }
  const ControllerConfig controller = config.controller();
  std::vector<double> rewards;
  rewards.reserve(episodes);
  for (int k = 1; k <= episodes; ++k) {
    const auto e = static_cast<std::uint64_t>(k);
    const WorldState start = reset(spec, derive_seed(config.seed, Stream::kEvalReset, e));
    const Trajectory trajectory = plan_with_frozen(
        buffer, start, spec, config.search, derive_seed(config.seed, Stream::kEvalSearch, e));
    rewards.push_back(rollout_reward(start, trajectory, spec, controller));
  }
  return summarize_rewards(std::move(rewards));
}

}  // namespace wpb
