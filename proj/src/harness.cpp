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

#include "wpb/harness.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wpb/config.hpp"
#include "wpb/csv_io.hpp"
#include "wpb/rng.hpp"

namespace wpb {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

ExperimentConfig load_config(const std::string& config_path, const ConfigOverrides& overrides) {
  if (config_path.empty()) return config_from_overrides(overrides);
  return parse_config_file(config_path, overrides);
}

}  // namespace

std::string manifest_text(const ExperimentConfig& config, const RunPaths& paths,
                          const std::string& started_at) {
  const int robot_dim = config.env_spec().robot_dim;
  const int search_dim =
      config.algorithm == Algorithm::kSequential ? robot_dim : config.waypoints * robot_dim;
  std::ostringstream out;
  out << "# wpb run manifest\n"
      << "# version = " << kVersion << '\n'
      << "# started = " << started_at << '\n'
      << "# master_seed = " << config.seed << '\n'
      << "# search_dim = " << search_dim << '\n'
      << "# episode_log = " << paths.episode_log().string() << '\n'
      << "# curve = " << paths.curve().string() << '\n';
  if (config.algorithm != Algorithm::kRandom) {
    out << "# models = " << paths.models().string() << '\n';
  }
  out << config_to_text(config);
  return out.str();
}

TrainingRun run_train(const ExperimentConfig& config, const RunPaths& paths) {
  config.validate();
  write_file_atomic(paths.manifest(), manifest_text(config, paths, utc_timestamp()));
  TrainingRun run = train(config);

  std::ostringstream log;
  write_episode_log(log, run.log);
  write_file_atomic(paths.episode_log(), log.str());
  std::ostringstream curve;
  write_curve(curve, summarize(run.log));
  write_file_atomic(paths.curve(), curve.str());
  if (!run.frozen.empty()) save_frozen_buffer(run.frozen, paths.models());
  return run;
}

EvalSummary run_eval(const ExperimentConfig& config, const RunPaths& paths, int episodes) {
  const FrozenBuffer buffer = load_frozen_buffer(paths.models());
  const EvalSummary summary = evaluate(buffer, config, episodes);

  std::ostringstream per_episode;
  per_episode << "episode,total_reward\n";
  for (std::size_t k = 0; k < summary.rewards.size(); ++k) {
    per_episode << k + 1 << ',' << format_real(summary.rewards[k]) << '\n';
  }
  per_episode << kCsvTrailer << '\n';
  write_file_atomic(paths.eval_episodes(), per_episode.str());

  std::ostringstream s;
  s << "run_id,seed,algorithm,env,episodes,mean_reward,std_error\n"
    << config.run_id << ',' << config.seed << ',' << algorithm_name(config.algorithm) << ','
    << env_name(config.env) << ',' << episodes << ',' << format_real(summary.mean) << ','
    << format_real(summary.std_error) << '\n'
    << kCsvTrailer << '\n';
  write_file_atomic(paths.eval_summary(), s.str());
  return summary;
}

void run_oracle(const ExperimentConfig& config, const RunPaths& paths) {
  config.validate();
  const EnvSpec spec = config.env_spec();
  const ControllerConfig controller = config.controller();
  std::ostringstream out;
  out << "reset,reset_seed,env,segments,oracle_reward,waypoints\n";
  for (int k = 1; k <= config.oracle_resets; ++k) {
    const std::uint64_t seed = derive_seed(config.seed, Stream::kReset, static_cast<unsigned>(k));
    const WorldState start = reset(spec, seed);
    const OracleResult r =
        oracle_solution(start, spec, controller, config.waypoints, config.oracle_resolution);
    out << k << ',' << seed << ',' << env_name(spec.kind) << ',' << config.waypoints << ','
        << format_real(r.reward) << ',' << format_waypoints(r.trajectory) << '\n';
  }
  out << kCsvTrailer << '\n';
  write_file_atomic(paths.oracle(), out.str());
}

std::string bounds_csv(const ProblemSizes& sizes) {
  std::ostringstream out;
  out << "K,T,H,n_states,n_actions,n_robot_states,mab_bound,mdp_bound,prefer_mab\n"
      << sizes.episodes << ',' << sizes.waypoints << ',' << sizes.horizon << ','
      << sizes.n_states << ',' << sizes.n_actions << ',' << sizes.n_robot_states << ','
      << format_real(mab_bound(sizes)) << ',' << format_real(mdp_bound(sizes)) << ','
      << (prefer_mab(sizes) ? "true" : "false") << '\n'
      << kCsvTrailer << '\n';
  return out.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Waypoint bandit learner: train, evaluate, oracle and regret bounds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::string env, algo;
  int episodes = 0;
  std::vector<std::string> sets;

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", seed, "master seed (overrides config)");
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--env", env, "reach | lift | drawer (overrides config)");
    sub->add_option("--algo", algo, "sequential | joint | random (overrides config)");
    sub->add_option("--set", sets, "extra key=value overrides");
  };
  CLI::App* train_cmd = app.add_subcommand("train", "run a learner and write its episode log");
  add_run_options(train_cmd);
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate saved frozen models");
  add_run_options(eval_cmd);
  eval_cmd->add_option("--episodes", episodes, "evaluation episodes (default: eval_episodes)");
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "oracle rewards for training resets");
  add_run_options(oracle_cmd);

  ProblemSizes sizes;
  std::string bounds_out;
  CLI::App* bounds_cmd = app.add_subcommand("bounds", "order-level regret lower bounds");
  bounds_cmd->add_option("--K", sizes.episodes, "total interactions")->required();
  bounds_cmd->add_option("--T", sizes.waypoints, "waypoints")->required();
  bounds_cmd->add_option("--H", sizes.horizon, "horizon")->required();
  bounds_cmd->add_option("--S", sizes.n_states, "number of world states")->required();
  bounds_cmd->add_option("--A", sizes.n_actions, "number of actions")->required();
  bounds_cmd->add_option("--SR", sizes.n_robot_states, "number of robot states")->required();
  bounds_cmd->add_option("--out", bounds_out, "also write bounds.csv here");

  std::string log_path;
  std::string summarize_out;
  CLI::App* summarize_cmd = app.add_subcommand("summarize", "learning curve from an episode log");
  summarize_cmd->add_option("--log", log_path, "episode log CSV")->required();
  summarize_cmd->add_option("--out", summarize_out, "write curve.csv here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    ConfigOverrides overrides;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (!env.empty()) overrides["env"] = env;
    if (!algo.empty()) overrides["algo"] = algo;
    for (const CLI::App* sub : {train_cmd, eval_cmd, oracle_cmd}) {
      if (*sub && sub->count("--seed") > 0) overrides["seed"] = std::to_string(seed);
    }

    if (*bounds_cmd) {
      try {
        sizes.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const std::string csv = bounds_csv(sizes);
      out << csv;
      if (!bounds_out.empty()) write_file_atomic(RunPaths{bounds_out}.bounds(), csv);
      return kExitOk;
    }
    if (*summarize_cmd) {
      std::ifstream in(log_path);
      if (!in) throw std::runtime_error("cannot read " + log_path);
      std::ostringstream curve;
      write_curve(curve, summarize(read_episode_log(in)));
      if (summarize_out.empty()) {
        out << curve.str();
      } else {
        write_file_atomic(RunPaths{summarize_out}.curve(), curve.str());
      }
      return kExitOk;
    }

    const ExperimentConfig config = load_config(config_path, overrides);
    const RunPaths paths{out_dir};
    if (*train_cmd) {
      const TrainingRun run = run_train(config, paths);
      out << "wrote " << run.log.size() << " episodes to " << paths.episode_log().string()
          << '\n';
    } else if (*eval_cmd) {
      const int n = episodes > 0 ? episodes : config.eval_episodes;
      const EvalSummary s = run_eval(config, paths, n);
      out << "mean_reward=" << format_real(s.mean) << " std_error=" << format_real(s.std_error)
          << " episodes=" << n << '\n';
    } else if (*oracle_cmd) {
      run_oracle(config, paths);
      out << "wrote " << paths.oracle().string() << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace wpb
