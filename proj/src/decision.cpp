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

#include "confctl/decision.hpp"

#include <stdexcept>

#include "confctl/experiments.hpp"
#include "confctl/parallel.hpp"

namespace confctl {

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double sum = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    sum += 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  }
  return sum;
}

}  // namespace

double integral_free_energy(const Trajectory& traj) {
  if (traj.size() < 2) {
    throw std::invalid_argument("integral_free_energy: need >= 2 samples");
  }
  return trapezoid(traj.t, traj.f);
}

double integral_quadratic_cost(const Trajectory& traj, const TaskSpec& task) {
  if (traj.size() < 2) {
    throw std::invalid_argument("integral_quadratic_cost: need >= 2 samples");
  }
  std::vector<double> q(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    double v = 0.0;
    if (task.kind == TaskKind::position) {
      const Vec2d d = traj.x[k].head<2>() - task.theta_goal;
      v += d.dot(task.p_theta * d);
    }
    if (task.kind != TaskKind::acceleration) {
      const Vec2d d = traj.x[k].tail<2>() - task.theta_dot_goal;
      v += d.dot(task.p_theta_dot * d);
    }
    const Vec2d dd = traj.theta_ddot[k] - task.theta_ddot_goal;
    v += dd.dot(task.p_theta_ddot * dd);
    v += traj.u[k].dot(task.p_u * traj.u[k]);
    q[k] = v;
  }
  return trapezoid(traj.t, q);
}

SelectionReport select_tool(std::span<const ArmParamsd> tools,
                            const TaskSpec& task, Objective objective,
                            const SimConfig& cfg, int jobs) {
  if (tools.empty()) {
    throw std::invalid_argument("select_tool: empty toolset");
  }

  SelectionReport report;
  report.objective = objective;
  report.tools.resize(tools.size());

  parallel_for(tools.size(), jobs, [&](std::size_t i) {
    ToolEvaluation& ev = report.tools[i];
    ev.tool_index = static_cast<int>(i);
    const StateSpaced ss = linearize(tools[i]);
    const ControlConfidence conf = control_confidence(task.kind, ss, task);
    ev.logdet = conf.logdet;
    if (!conf.positive_definite) {
      ev.status = ToolStatus::singular_confidence;
      return;
    }
    if (objective == Objective::confidence_only) {
      ev.objective_value = conf.logdet;
      return;
    }
    const SimResult sim = simulate(tools[i], ss, task, cfg, Vec2d::Zero());
    if (!sim.ok()) {
      ev.status = ToolStatus::integration_failure;
      return;
    }
    ev.task_error = task_error(sim.trajectory, task);
    ev.objective_value =
        objective == Objective::free_energy
            ? integral_free_energy(sim.trajectory)
            : integral_quadratic_cost(sim.trajectory, task);
  });

  const bool maximize = objective == Objective::confidence_only;
  int best = -1;
  for (const ToolEvaluation& ev : report.tools) {
    if (!ev.objective_value) continue;
    if (best < 0) {
      best = ev.tool_index;
      continue;
    }
    const double v = *ev.objective_value;
    const double b = *report.tools[best].objective_value;
    if (maximize ? v > b : v < b) best = ev.tool_index;
  }
  if (best < 0) {
    throw NoValidToolError("select_tool: no valid tool in the set");
  }
  report.chosen_index = best;
  return report;
}

}  // namespace confctl
