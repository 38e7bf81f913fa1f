// Copyright 2026 The confctl Authors
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

#include "confctl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace confctl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& key,
                                  const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("config: bad number '" + item + "' for " + key);
    }
  }
  if (out.empty()) throw ConfigError("config: empty value for " + key);
  return out;
}

double parse_one(const std::string& key, const std::string& value) {
  const auto v = parse_numbers(key, value);
  if (v.size() != 1) throw ConfigError("config: " + key + " takes 1 value");
  return v[0];
}

Vec2d parse_vec2(const std::string& key, const std::string& value) {
  const auto v = parse_numbers(key, value);
  if (v.size() != 2) throw ConfigError("config: " + key + " takes 2 values");
  return Vec2d(v[0], v[1]);
}

Vec4d parse_vec4(const std::string& key, const std::string& value) {
  const auto v = parse_numbers(key, value);
  if (v.size() != 4) throw ConfigError("config: " + key + " takes 4 values");
  return Vec4d(v[0], v[1], v[2], v[3]);
}

// Two values make a diagonal, four a row-major full matrix.
Mat2d parse_mat2(const std::string& key, const std::string& value) {
  const auto v = parse_numbers(key, value);
  if (v.size() == 2) return Vec2d(v[0], v[1]).asDiagonal();
  if (v.size() == 4) {
    Mat2d m;
    m << v[0], v[1], v[2], v[3];
    return m;
  }
  throw ConfigError("config: " + key + " takes 2 (diagonal) or 4 values");
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_one(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("config: " + key + " must be an integer");
  }
  return i;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const std::string v = trim(value);
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("config: " + key + " must be an unsigned integer");
  }
  return out;
}

}  // namespace

TaskSpec RunConfig::make_task() const {
  TaskSpec t = default_task(task_kind);
  if (theta_goal) t.theta_goal = *theta_goal;
  if (theta_dot_goal) t.theta_dot_goal = *theta_dot_goal;
  if (theta_ddot_goal) t.theta_ddot_goal = *theta_ddot_goal;
  if (eta_u) t.eta_u = *eta_u;
  if (p_theta) t.p_theta = *p_theta;
  if (p_theta_dot) t.p_theta_dot = *p_theta_dot;
  if (p_theta_ddot) t.p_theta_ddot = *p_theta_ddot;
  if (p_u) t.p_u = *p_u;
  return t;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key,
                   const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "task.kind") {
    try {
      cfg.task_kind = task_kind_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else if (key == "task.theta_goal") {
    cfg.theta_goal = parse_vec2(key, value);
  } else if (key == "task.theta_dot_goal") {
    cfg.theta_dot_goal = parse_vec2(key, value);
  } else if (key == "task.theta_ddot_goal") {
    cfg.theta_ddot_goal = parse_vec2(key, value);
  } else if (key == "task.eta_u") {
    cfg.eta_u = parse_vec2(key, value);
  } else if (key == "task.p_theta") {
    cfg.p_theta = parse_mat2(key, value);
  } else if (key == "task.p_theta_dot") {
    cfg.p_theta_dot = parse_mat2(key, value);
  } else if (key == "task.p_theta_ddot") {
    cfg.p_theta_ddot = parse_mat2(key, value);
  } else if (key == "task.p_u") {
    cfg.p_u = parse_mat2(key, value);
  } else if (key == "sim.horizon") {
    cfg.sim.horizon = parse_one(key, value);
  } else if (key == "sim.dt_out") {
    cfg.sim.dt_out = parse_one(key, value);
  } else if (key == "sim.x0") {
    cfg.sim.x0 = parse_vec4(key, value);
  } else if (key == "sim.u0") {
    cfg.sim.u0 = parse_vec2(key, value);
  } else if (key == "sim.gamma") {
    cfg.sim.gamma = parse_one(key, value);
  } else if (key == "sim.rtol") {
    cfg.sim.rtol = parse_one(key, value);
  } else if (key == "sim.atol") {
    cfg.sim.atol = parse_one(key, value);
  } else if (key == "experiment.n_tools") {
    cfg.n_tools = parse_int(key, value);
  } else if (key == "experiment.n_perturbation_tools") {
    cfg.n_perturbation_tools = parse_int(key, value);
  } else if (key == "experiment.grid_trials") {
    cfg.grid_trials = parse_int(key, value);
  } else if (key == "experiment.grid_toolset") {
    cfg.grid_toolset = parse_int(key, value);
  } else if (key == "experiment.benchmark_trials") {
    cfg.benchmark_trials = parse_int(key, value);
  } else if (key == "experiment.benchmark_toolset") {
    cfg.benchmark_toolset = parse_int(key, value);
  } else if (key == "experiment.delta_t") {
    cfg.delta_t = parse_one(key, value);
  } else if (key == "experiment.delta_t_sweep") {
    cfg.delta_t_sweep = parse_numbers(key, value);
  } else if (key == "experiment.seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    if (value.empty()) throw ConfigError("config: out_dir must be nonempty");
    cfg.out_dir = value;
  } else if (key == "jobs") {
    cfg.jobs = parse_int(key, value);
    if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides) {
  RunConfig cfg;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("config: cannot open " + *path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string stripped = trim(line);
      if (stripped.empty() || stripped[0] == '#') continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config: line " + std::to_string(line_no) +
                          " is not 'key = value'");
      }
      apply_setting(cfg, stripped.substr(0, eq), stripped.substr(eq + 1));
    }
  }
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set expects key=value, got '" + ov + "'");
    }
    apply_setting(cfg, ov.substr(0, eq), ov.substr(eq + 1));
  }
  return cfg;
}

}  // namespace confctl
