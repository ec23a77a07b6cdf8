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

#ifndef WPB_HARNESS_HPP_
#define WPB_HARNESS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "wpb/bounds.hpp"
#include "wpb/learner.hpp"

namespace wpb {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeError = 2;

// Output layout of a training run directory.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path manifest() const { return root / "manifest.txt"; }
  std::filesystem::path episode_log() const { return root / "episodes.csv"; }
  std::filesystem::path curve() const { return root / "curve.csv"; }
  std::filesystem::path models() const { return root / "models"; }
  std::filesystem::path eval_summary() const { return root / "eval_summary.csv"; }
  std::filesystem::path eval_episodes() const { return root / "eval_episodes.csv"; }
  std::filesystem::path oracle() const { return root / "oracle.csv"; }
  std::filesystem::path bounds() const { return root / "bounds.csv"; }
};

// The manifest is a config file whose comment lines carry the run metadata,
// so it can be passed back through --config to reproduce the run.
std::string manifest_text(const ExperimentConfig& config, const RunPaths& paths,
                          const std::string& started_at);

// train: manifest, then episode log, learning curve and frozen models.
TrainingRun run_train(const ExperimentConfig& config, const RunPaths& paths);

// eval: loads <out>/models and writes the summary and per-episode rewards.
EvalSummary run_eval(const ExperimentConfig& config, const RunPaths& paths, int episodes);

// oracle: oracle reward for the first `oracle_resets` training resets.
void run_oracle(const ExperimentConfig& config, const RunPaths& paths);

std::string bounds_csv(const ProblemSizes& sizes);

// Full command line:
//   wpb train|eval|oracle --config <path> [--seed S] [--out DIR] [--env E] [--algo A]
//                         [--episodes N] [--set key=value]...
//   wpb bounds --K k --T t --H h --S s --A a --SR r [--out DIR]
//   wpb summarize --log <episodes.csv> [--out DIR]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wpb

#endif  // WPB_HARNESS_HPP_
