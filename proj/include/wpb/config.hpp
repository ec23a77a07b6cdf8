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

#ifndef WPB_CONFIG_HPP_
#define WPB_CONFIG_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "wpb/learner.hpp"

namespace wpb {

// Line-oriented `key = value` experiment configuration. `#` starts a comment;
// blank lines are ignored. Keys and defaults:
//
//   env               (required) reach | lift | drawer
//   algo              sequential        sequential | joint | random
//   run_id            run
//   seed              1
//   T                 2                 waypoints per trajectory
//   H                 100               timesteps per episode
//   episodes_per_mab  200
//   N                 10                ensemble size
//   hidden            64                hidden-layer width
//   learning_rate     0.001
//   epochs            10                passes per episode update
//   batch_size        32
//   restarts          8
//   screen            16                uniform draws screened per restart
//   ascent_steps      200
//   step_size         0.05
//   include_best_seed true
//   oracle_resolution 101
//   eval_episodes     100
//   oracle_resets     20
//
// Unknown keys, duplicate keys and malformed values are ConfigErrors.
using ConfigOverrides = std::map<std::string, std::string>;

ExperimentConfig parse_config(std::istream& in, const ConfigOverrides& overrides = {});
ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   const ConfigOverrides& overrides = {});
// Only flags; equivalent to an empty file.
ExperimentConfig config_from_overrides(const ConfigOverrides& overrides);

// Snapshot in the same format, one key per line, every key present.
std::string config_to_text(const ExperimentConfig& config);

}  // namespace wpb

#endif  // WPB_CONFIG_HPP_
