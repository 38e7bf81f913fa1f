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

#ifndef CONFCTL_CONFIG_HPP_
#define CONFCTL_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confctl/controller.hpp"
#include "confctl/task.hpp"

namespace confctl {

/// Full run configuration. Defaults reproduce the reference protocol:
/// position goal [pi/3, pi/6], velocity goal [0, 2], acceleration goal
/// [0, 0.1], the per-task precisions of default_task(), 5 s horizon at
/// dt = 0.05, x0 at the hanging equilibrium, u0 = [0.1, 0.1], and a
/// -0.8 Nm perturbation on both joints.
struct RunConfig {
  TaskKind task_kind = TaskKind::velocity;
  // Unset fields fall back to default_task(task_kind).
  std::optional<Vec2d> theta_goal, theta_dot_goal, theta_ddot_goal, eta_u;
  std::optional<Mat2d> p_theta, p_theta_dot, p_theta_ddot, p_u;

  SimConfig sim;

  int n_tools = 300;           // conf-vs-error tool count
  int n_perturbation_tools = 100;
  int grid_trials = 25;
  int grid_toolset = 5;
  int benchmark_trials = 50;
  int benchmark_toolset = 10;
  double delta_t = -0.8;
  std::vector<double> delta_t_sweep{-0.8, -0.4, 0.4, 0.8};
  std::uint64_t seed = 123456789;
  std::string out_dir = "out";
  int jobs = 1;

  /// The task actually run: per-kind defaults overlaid with any explicit
  /// goal/precision settings.
  TaskSpec make_task() const;
};

/// Error in a config file or --set override; the CLI maps it to exit 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Applies `key = value` lines from an optional config file, then the
/// --set overrides, onto the defaults. Lines starting with # and blank
/// lines are ignored. Unknown keys are errors.
RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides);

/// Parses one "key=value" pair onto cfg; throws ConfigError for unknown
/// keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key,
                   const std::string& value);

}  // namespace confctl

#endif  // CONFCTL_CONFIG_HPP_
