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

#include "wpb/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace wpb {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = s.find(sep, begin);
    parts.push_back(s.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& token, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw std::runtime_error(std::string("bad ") + what + " '" + token + "'");
  }
  return v;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string format_waypoints(const Trajectory& trajectory) {
  std::string s;
  for (std::size_t j = 0; j < trajectory.size(); ++j) {
    if (j) s += ';';
    const auto& w = trajectory[j];
    for (int k = 0; k < w.dim(); ++k) {
      if (k) s += ' ';
      s += format_real(w[k]);
    }
  }
  return s;
}

Trajectory parse_waypoints(const std::string& text) {
  Trajectory t;
  if (text.empty()) return t;
  for (const auto& part : split(text, ';')) {
    const auto coords = split(part, ' ');
    if (coords.size() > static_cast<std::size_t>(kMaxCoords)) {
      throw std::runtime_error("waypoint has too many coordinates");
    }
    Coords c(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t k = 0; k < coords.size(); ++k) {
      c[static_cast<Eigen::Index>(k)] = parse_number<double>(coords[k], "coordinate");
    }
    t.append(Waypoint(c));
  }
  return t;
}

void write_episode_log(std::ostream& out, const std::vector<EpisodeRow>& rows) {
  out << kEpisodeLogHeader << '\n';
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.seed << ',' << algorithm_name(r.algorithm) << ','
        << env_name(r.env) << ',' << r.episode << ',' << r.mab_index << ','
        << format_real(r.total_reward) << ',' << format_real(r.oracle_reward) << ','
        << format_real(r.cum_regret) << ',' << format_real(r.wall_ms) << ','
        << format_waypoints(r.waypoints) << '\n';
  }
  out << kCsvTrailer << '\n';
}

std::vector<EpisodeRow> read_episode_log(std::istream& in) {
  std::vector<EpisodeRow> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  bool trailer_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      if (trailer_seen) {
        if (!line.empty()) throw std::runtime_error("content after the #end trailer");
        continue;
      }
      if (!header_seen) {
        if (line != kEpisodeLogHeader) throw std::runtime_error("unexpected header");
        header_seen = true;
        continue;
      }
      if (line == kCsvTrailer) {
        trailer_seen = true;
        continue;
      }
      const auto f = split(line, ',');
      if (f.size() != 11) {
        throw std::runtime_error("expected 11 fields, found " + std::to_string(f.size()));
      }
      EpisodeRow r;
      r.run_id = f[0];
      r.seed = parse_number<std::uint64_t>(f[1], "seed");
      r.algorithm = parse_algorithm(f[2]);
      r.env = parse_env_kind(f[3]);
      r.episode = parse_number<int>(f[4], "episode");
      r.mab_index = parse_number<int>(f[5], "mab_index");
      r.total_reward = parse_number<double>(f[6], "total_reward");
      r.oracle_reward = parse_number<double>(f[7], "oracle_reward");
      r.cum_regret = parse_number<double>(f[8], "cum_regret");
      r.wall_ms = parse_number<double>(f[9], "wall_ms");
      r.waypoints = parse_waypoints(f[10]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw std::runtime_error("line 1: empty episode log");
  if (!trailer_seen) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": missing #end trailer");
  }
  return rows;
}

std::vector<CurveRow> summarize(const std::vector<EpisodeRow>& rows, int window) {
  if (window < 1) throw std::invalid_argument("summarize: window must be positive");
  std::vector<CurveRow> out;
  out.reserve(rows.size());
  double regret = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t n = std::min<std::size_t>(k + 1, static_cast<std::size_t>(window));
    double sum = 0.0;
    for (std::size_t j = k + 1 - n; j <= k; ++j) sum += rows[j].total_reward;
    regret += rows[k].oracle_reward - rows[k].total_reward;
    out.push_back({rows[k].episode, rows[k].total_reward, sum / static_cast<double>(n), regret});
  }
  return out;
}

void write_curve(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "episode,total_reward,moving_average,cum_regret\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << format_real(r.total_reward) << ','
        << format_real(r.moving_average) << ',' << format_real(r.cum_regret) << '\n';
  }
  out << kCsvTrailer << '\n';
}

}  // namespace wpb
