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

#ifndef WPB_LEARNER_HPP_
#define WPB_LEARNER_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wpb/core.hpp"
#include "wpb/ensemble.hpp"
#include "wpb/env.hpp"
#include "wpb/optimizer.hpp"

namespace wpb {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Algorithm { kSequential, kJoint, kRandom };

Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm algo);

struct ExperimentConfig {
  std::string run_id = "run";
  EnvKind env = EnvKind::kReach;
  Algorithm algorithm = Algorithm::kSequential;
  std::uint64_t seed = 1;
  int waypoints = 2;            // T
  int horizon = 100;            // H
  int episodes_per_mab = 200;   // K_i
  int ensemble_size = 10;       // N
  int hidden_dim = 64;
  double learning_rate = 0.001;
  UpdateConfig update;
  SearchConfig search;
  int oracle_resolution = 101;
  int eval_episodes = 100;
  int oracle_resets = 20;

  // Throws ConfigError on the first violated constraint.
  void validate() const;

  // K = T * K_i; the joint and random baselines get the same budget.
  int total_episodes() const { return waypoints * episodes_per_mab; }
  EnvSpec env_spec() const { return make_env_spec(env, horizon); }
  ControllerConfig controller() const { return ControllerConfig(horizon, waypoints); }
};

struct EpisodeRow {
  std::string run_id;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kSequential;
  EnvKind env = EnvKind::kReach;
  int episode = 0;    // 1-based across the whole run
  int mab_index = 0;  // bandit index; 1 for joint, 0 for random
  double total_reward = 0.0;
  double oracle_reward = 0.0;
  double cum_regret = 0.0;
  double wall_ms = 0.0;
  Trajectory waypoints;
};

// REG(k) = sum over episodes of R* - R(tau^k).
class RegretTracker {
 public:
  struct Entry {
    int episode;
    double oracle_reward;
    double reward;
    double cumulative;
  };

  double record(int episode, double oracle_reward, double reward);
  double cumulative() const { return entries_.empty() ? 0.0 : entries_.back().cumulative; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

struct TrainingRun {
  std::vector<EpisodeRow> log;
  FrozenBuffer frozen;  // empty for the random baseline
  int search_dim = 0;   // dimension of the arm space searched per episode
};

struct LearnerHooks {
  std::function<void(int mab_index, const FrozenBuffer&)> on_mab_start;
  std::function<void(int mab_index, const FrozenBuffer&)> on_mab_end;
  std::function<void(const EpisodeRow&)> on_episode;
};

// Sequential bandits over waypoints 1..T with ensemble posterior sampling
// inside each bandit and frozen mean-argmax prefixes between them.
TrainingRun run_sequential(const ExperimentConfig& config, const LearnerHooks& hooks = {});

// One bandit over the whole T-waypoint trajectory.
TrainingRun run_joint(const ExperimentConfig& config, const LearnerHooks& hooks = {});

// Uniform waypoints, no learning.
TrainingRun run_random(const ExperimentConfig& config, const LearnerHooks& hooks = {});

// Dispatches on config.algorithm.
TrainingRun train(const ExperimentConfig& config, const LearnerHooks& hooks = {});

// Waypoints chosen by maximizing each frozen ensemble's mean prediction in
// turn. `seed` drives the search restarts.
Trajectory plan_with_frozen(const FrozenBuffer& buffer, const WorldState& start,
                            const EnvSpec& spec, const SearchConfig& search, std::uint64_t seed);

struct EvalSummary {
  std::vector<double> rewards;
  double mean = 0.0;
  double std_error = 0.0;  // population std / sqrt(episodes)
};

// Fresh resets, full trajectories from the frozen models only.
EvalSummary evaluate(const FrozenBuffer& buffer, const ExperimentConfig& config, int episodes);

// Mean and std/sqrt(n) with the population standard deviation.
EvalSummary summarize_rewards(std::vector<double> rewards);

}  // namespace wpb

#endif  // WPB_LEARNER_HPP_
