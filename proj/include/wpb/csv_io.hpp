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

#ifndef WPB_CSV_IO_HPP_
#define WPB_CSV_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wpb/learner.hpp"

namespace wpb {

// Every CSV written by this project ends with this comment line; readers
// reject files without it.
inline constexpr const char* kCsvTrailer = "#end";

inline constexpr const char* kEpisodeLogHeader =
    "run_id,seed,algorithm,env,episode,mab_index,total_reward,oracle_reward,cum_regret,wall_ms,"
    "waypoints";

// Writes to a sibling temporary file and renames it into place, so the
// destination is either complete or untouched.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Waypoints as "x y g;x y g": coordinates space-separated, waypoints
// semicolon-joined.
std::string format_waypoints(const Trajectory& trajectory);
Trajectory parse_waypoints(const std::string& text);

void write_episode_log(std::ostream& out, const std::vector<EpisodeRow>& rows);
// Throws std::runtime_error("line N: ...") on malformed input.
std::vector<EpisodeRow> read_episode_log(std::istream& in);

struct CurveRow {
  int episode = 0;
  double total_reward = 0.0;
  double moving_average = 0.0;
  double cum_regret = 0.0;
};

inline constexpr int kCurveWindow = 10;

// Trailing moving average (shorter window at the start) and regret prefix
// sums recomputed from the oracle and episode rewards.
std::vector<CurveRow> summarize(const std::vector<EpisodeRow>& rows, int window = kCurveWindow);
void write_curve(std::ostream& out, const std::vector<CurveRow>& rows);

}  // namespace wpb

#endif  // WPB_CSV_IO_HPP_
