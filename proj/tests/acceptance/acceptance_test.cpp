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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wpb/bounds.hpp"
#include "wpb/csv_io.hpp"
#include "wpb/learner.hpp"
#include "wpb/optimizer.hpp"
#include "wpb/reward_net.hpp"

namespace {

using namespace wpb;
using Clock = std::chrono::steady_clock;

constexpr int kSeeds = 5;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double mean_reward(const std::vector<EpisodeRow>& log, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t k = begin; k < end; ++k) s += log[k].total_reward;
  return s / static_cast<double>(end - begin);
}

double mean_oracle(const std::vector<EpisodeRow>& log, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t k = begin; k < end; ++k) s += log[k].oracle_reward;
  return s / static_cast<double>(end - begin);
}

// Relative error with a small absolute floor so vanishing derivatives do not
// divide by zero.
double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-4});
}

void gradient_check() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const int in = 2 + draw % 6;
    const int hidden = 8 + 8 * (draw % 3);
    NetworkParams p = init_network(in, hidden, 7000 + draw);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.flat()[i] += 0.05 * u(gen);
    Vec x(in);
    for (int j = 0; j < in; ++j) x[j] = u(gen);
    const double target = 2.0 * u(gen);

    auto loss = [&](const NetworkParams& q) {
      const double e = forward(q, x) - target;
      return 0.5 * e * e;
    };
    const Vec gp = grad_params(p, x, target);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      NetworkParams up = p, down = p;
      up.flat()[i] += h;
      down.flat()[i] -= h;
      worst = std::max(worst, rel_error(gp[i], (loss(up) - loss(down)) / (2.0 * h)));
    }
    const Vec gx = grad_input(p, x);
    for (int j = 0; j < in; ++j) {
      Vec xu = x, xd = x;
      xu[j] += h;
      xd[j] -= h;
      worst = std::max(worst, rel_error(gx[j], (forward(p, xu) - forward(p, xd)) / (2.0 * h)));
    }
  }
  const double secs = seconds_since(t0);
  report(1, "gradient correctness", worst < 1e-4 && secs < 10.0,
         fmt("max relative error %.3g over 100 draws (< 1e-4), %.1f s (< 10 s)", worst, secs));
}

// Default linear-layer init: Kaiming weights plus biases uniform in
// +-1/sqrt(fan_in), so the maximum is not pinned to the origin.
NetworkParams random_net(int in, int hidden, std::uint64_t seed) {
  NetworkParams p = init_network(in, hidden, seed);
  Rng rng(seed ^ 0x5bd1e995u);
  for (int i = 0; i < hidden; ++i) p.b1()[i] = rng.uniform(-1.0, 1.0) / std::sqrt(double(in));
  for (int i = 0; i < hidden; ++i) p.b2()[i] = rng.uniform(-1.0, 1.0) / std::sqrt(double(hidden));
  p.b3() = rng.uniform(-1.0, 1.0) / std::sqrt(double(hidden));
  return p;
}

void optimizer_check() {
  const auto t0 = Clock::now();
  const WorkspaceBox box((Vec(2) << -1, 0).finished(), (Vec(2) << 1, 1).finished());
  double worst_margin = INFINITY;
  int passed = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkParams p = random_net(2, 32, 9100 + trial);
    const Objective f = [&p](const Vec& x, Vec* g) { return value_and_grad_input(p, x, g); };
    Rng rng(trial + 1);
    const double found = maximize(f, box, SearchConfig{}, std::nullopt, rng).value;
    const double grid = grid_argmax(f, box, 101).value;
    // 0.99 x grid for positive maxima; within 1% of |grid| below it otherwise.
    const double threshold = grid - 0.01 * std::abs(grid);
    worst_margin = std::min(worst_margin, found - threshold);
    if (found >= threshold) ++passed;
  }
  const double secs = seconds_since(t0);
  report(2, "optimizer vs grid", passed == 20 && secs < 30.0,
         fmt("%.0f/20 objectives reach 0.99 x grid max (worst margin %.3g), %.1f s (< 30 s)", passed,
             worst_margin, secs));
}

struct ReachRuns {
  std::vector<TrainingRun> runs;
  std::vector<ExperimentConfig> configs;
};

ReachRuns reach_convergence() {
  const auto t0 = Clock::now();
  ReachRuns out;
  int converged = 0;
  std::ostringstream detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    ExperimentConfig c;
    c.env = EnvKind::kReach;
    c.waypoints = 1;
    c.episodes_per_mab = 200;
    c.seed = static_cast<std::uint64_t>(seed);
    TrainingRun run = run_sequential(c);
    const double r = mean_reward(run.log, 180, 200);
    const double o = mean_oracle(run.log, 180, 200);
    if (r >= 0.9 * o) ++converged;
    detail << (seed > 1 ? " " : "") << fmt("%.3f", r / o);
    out.runs.push_back(std::move(run));
    out.configs.push_back(c);
  }
  const double secs = seconds_since(t0);
  report(3, "reach convergence", converged >= 4 && secs < 300.0,
         fmt("%.0f/5 seeds with final-20 mean >= 0.90 x oracle, %.0f s (< 300 s); ratios ",
             converged, secs) +
             detail.str());
  return out;
}

void regret_sublinearity(const ReachRuns& reach) {
  double reg100 = 0.0, reg200 = 0.0;
  for (const auto& run : reach.runs) {
    reg100 += run.log[99].cum_regret / kSeeds;
    reg200 += run.log[199].cum_regret / kSeeds;
  }
  report(4, "regret sublinearity", reg200 < 2.0 * reg100,
         fmt("mean REG(100) = %.2f, REG(200) = %.2f, 2 x REG(100) = %.2f", reg100, reg200,
             2.0 * reg100));
}

std::vector<double> lift_sequential() {
  const auto t0 = Clock::now();
  int jumps = 0;
  std::vector<double> finals;
  std::ostringstream detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    ExperimentConfig c;
    c.env = EnvKind::kLift;
    c.waypoints = 2;
    c.episodes_per_mab = 200;
    c.seed = static_cast<std::uint64_t>(seed);
    const TrainingRun run = run_sequential(c);
    const double last_first = mean_reward(run.log, 180, 200);
    const double first_second = mean_reward(run.log, 200, 220);
    if (first_second > last_first) ++jumps;
    finals.push_back(mean_reward(run.log, 380, 400));
    detail << (seed > 1 ? "; " : "") << fmt("%.2f -> %.2f", last_first, first_second);
  }
  const double secs = seconds_since(t0);
  report(5, "waypoint jump", jumps >= 4 && secs < 900.0,
         fmt("%.0f/5 seeds jump at the bandit switch, %.0f s (< 900 s); ", jumps, secs) +
             detail.str());
  return finals;
}

void sequential_beats_joint(const std::vector<double>& sequential_finals) {
  int wins = 0;
  std::ostringstream detail;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    ExperimentConfig c;
    c.env = EnvKind::kLift;
    c.algorithm = Algorithm::kJoint;
    c.waypoints = 2;
    c.episodes_per_mab = 200;
    c.seed = static_cast<std::uint64_t>(seed);
    const TrainingRun run = run_joint(c);
    const double joint = mean_reward(run.log, run.log.size() - 20, run.log.size());
    const double seq = sequential_finals[seed - 1];
    if (seq > joint) ++wins;
    detail << (seed > 1 ? "; " : "") << fmt("%.2f vs %.2f", seq, joint);
  }
  report(6, "sequential beats joint", wins >= 4,
         fmt("%.0f/5 seeds, final-20 sequential vs joint: ", wins) + detail.str());
}

void bounds_algebra() {
  std::mt19937_64 gen(55);
  auto draw = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(gen);
  };
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    ProblemSizes p;
    p.horizon = draw(2, 200);
    p.waypoints = draw(1, p.horizon - 1);
    p.episodes = draw(1, 2000);
    p.n_states = draw(1, 500);
    p.n_actions = draw(1, 8);
    p.n_robot_states = draw(1, p.n_states);
    if (prefer_mab(p) == (mab_bound(p) < mdp_bound(p))) ++agree;
  }
  ProblemSizes spot;
  spot.episodes = 400;
  spot.waypoints = 2;
  spot.horizon = 100;
  spot.n_states = 200;
  spot.n_actions = 4;
  spot.n_robot_states = 50;
  const bool spot_ok = prefer_mab(spot);
  report(7, "bounds algebra", agree == 1000 && spot_ok,
         fmt("%.0f/1000 random sizes agree; spot value prefer_mab = ", agree) +
             (spot_ok ? "true" : "false"));
}

std::string log_without_timing(std::vector<EpisodeRow> log) {
  for (auto& row : log) row.wall_ms = 0.0;
  std::ostringstream out;
  write_episode_log(out, log);
  return out.str();
}

void determinism() {
  ExperimentConfig c;
  c.env = EnvKind::kLift;
  c.waypoints = 2;
  c.episodes_per_mab = 30;
  c.seed = 7;
  const std::string a = log_without_timing(train(c).log);
  const std::string b = log_without_timing(train(c).log);
  report(8, "determinism", a == b,
         fmt("two lift runs of %.0f episodes, logs ", c.total_episodes()) +
             (a == b ? "byte-identical" : "differ"));
}

void evaluation_protocol(const ReachRuns& reach) {
  const TrainingRun& run = reach.runs[0];
  const EvalSummary s = evaluate(run.frozen, reach.configs[0], 100);
  const double train_final = mean_reward(run.log, 180, 200);
  double mean = 0.0;
  for (double r : s.rewards) mean += r / 100.0;
  double var = 0.0;
  for (double r : s.rewards) var += (r - mean) * (r - mean) / 100.0;
  const double se = std::sqrt(var) / 10.0;
  const bool se_ok = s.rewards.size() == 100 && std::abs(se - s.std_error) <= 1e-12 * (1 + se) &&
                     std::abs(mean - s.mean) <= 1e-12 * (1 + std::abs(mean));
  const bool close = std::abs(s.mean - train_final) <= 0.10 * std::abs(train_final);
  report(9, "evaluation protocol", se_ok && close,
         fmt("eval mean %.3f +- %.3f vs training final-20 %.3f (within 10%%)", s.mean, s.std_error,
             train_final) +
             (se_ok ? ", SE = std/sqrt(100)" : ", SE mismatch"));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  gradient_check();
  optimizer_check();
  const ReachRuns reach = reach_convergence();
  regret_sublinearity(reach);
  const std::vector<double> lift_finals = lift_sequential();
  sequential_beats_joint(lift_finals);
  bounds_algebra();
  determinism();
  evaluation_protocol(reach);
  std::printf("%d of 9 criteria failed, %.0f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
