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

#include "wpb/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string_view>

namespace wpb {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T to_number(const std::string& key, const std::string& value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + value + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

template <typename T, typename Field>
Setter number(Field field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    field(c) = to_number<T>(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"env",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         try {
           c.env = parse_env_kind(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
       }},
      {"algo", [](ExperimentConfig& c, const std::string&,
                  const std::string& v) { c.algorithm = parse_algorithm(v); }},
      {"run_id", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.run_id = v; }},
      {"seed", number<std::uint64_t>([](ExperimentConfig& c) -> auto& { return c.seed; })},
      {"T", number<int>([](ExperimentConfig& c) -> auto& { return c.waypoints; })},
      {"H", number<int>([](ExperimentConfig& c) -> auto& { return c.horizon; })},
      {"episodes_per_mab",
       number<int>([](ExperimentConfig& c) -> auto& { return c.episodes_per_mab; })},
      {"N", number<int>([](ExperimentConfig& c) -> auto& { return c.ensemble_size; })},
      {"hidden", number<int>([](ExperimentConfig& c) -> auto& { return c.hidden_dim; })},
      {"learning_rate",
       number<double>([](ExperimentConfig& c) -> auto& { return c.learning_rate; })},
      {"epochs", number<int>([](ExperimentConfig& c) -> auto& { return c.update.epochs; })},
      {"batch_size", number<int>([](ExperimentConfig& c) -> auto& { return c.update.batch_size; })},
      {"restarts", number<int>([](ExperimentConfig& c) -> auto& { return c.search.restarts; })},
      {"screen", number<int>([](ExperimentConfig& c) -> auto& { return c.search.screen; })},
      {"ascent_steps",
       number<int>([](ExperimentConfig& c) -> auto& { return c.search.ascent_steps; })},
      {"step_size", number<double>([](ExperimentConfig& c) -> auto& { return c.search.step_size; })},
      {"include_best_seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.search.include_best_seed = to_bool(k, v);
       }},
      {"oracle_resolution",
       number<int>([](ExperimentConfig& c) -> auto& { return c.oracle_resolution; })},
      {"eval_episodes", number<int>([](ExperimentConfig& c) -> auto& { return c.eval_episodes; })},
      {"oracle_resets", number<int>([](ExperimentConfig& c) -> auto& { return c.oracle_resets; })},
  };
  return table;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(c, key, value);
}

ExperimentConfig finish(std::map<std::string, std::string> values,
                        const ConfigOverrides& overrides) {
  for (const auto& [k, v] : overrides) values[k] = v;
  if (!values.count("env") || values["env"].empty()) {
    throw ConfigError("missing environment name: set 'env = reach|lift|drawer' or --env");
  }
  ExperimentConfig c;
  for (const auto& [k, v] : values) apply(c, k, v);
  c.validate();
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const ConfigOverrides& overrides) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!setters().count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown config key '" + key + "'");
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return finish(std::move(values), overrides);
}

ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                   const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_config(in, overrides);
}

ExperimentConfig config_from_overrides(const ConfigOverrides& overrides) {
  for (const auto& [k, v] : overrides) {
    if (!setters().count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  return finish({}, overrides);
}

std::string config_to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "env = " << env_name(c.env) << '\n'
      << "algo = " << algorithm_name(c.algorithm) << '\n'
      << "run_id = " << c.run_id << '\n'
      << "seed = " << c.seed << '\n'
      << "T = " << c.waypoints << '\n'
      << "H = " << c.horizon << '\n'
      << "episodes_per_mab = " << c.episodes_per_mab << '\n'
      << "N = " << c.ensemble_size << '\n'
      << "hidden = " << c.hidden_dim << '\n'
      << "learning_rate = " << format_real(c.learning_rate) << '\n'
      << "epochs = " << c.update.epochs << '\n'
      << "batch_size = " << c.update.batch_size << '\n'
      << "restarts = " << c.search.restarts << '\n'
      << "screen = " << c.search.screen << '\n'
      << "ascent_steps = " << c.search.ascent_steps << '\n'
      << "step_size = " << format_real(c.search.step_size) << '\n'
      << "include_best_seed = " << (c.search.include_best_seed ? "true" : "false") << '\n'
      << "oracle_resolution = " << c.oracle_resolution << '\n'
      << "eval_episodes = " << c.eval_episodes << '\n'
      << "oracle_resets = " << c.oracle_resets << '\n';
  return out.str();
}

}  // namespace wpb
