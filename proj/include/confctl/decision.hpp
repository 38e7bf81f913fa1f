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

#ifndef CONFCTL_DECISION_HPP_
#define CONFCTL_DECISION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confctl/confidence.hpp"
#include "confctl/controller.hpp"

namespace confctl {

/// The three selection objectives: the free-energy integral, the classical
/// quadratic performance + effort integral, and ranking by control
/// confidence alone (no simulation).
enum class Objective { free_energy, quadratic, confidence_only };

inline const char* to_string(Objective o) {
  switch (o) {
    case Objective::free_energy: return "free_energy";
    case Objective::quadratic: return "quadratic";
    case Objective::confidence_only: return "confidence_only";
  }
  return "?";
}

/// Trapezoidal integral of the recorded free-energy series over the
/// trajectory grid. The series already carries the constant confidence term,
/// so the result decomposes as (performance + control cost integral)
/// - logdet * horizon / 2.
double integral_free_energy(const Trajectory& traj);

/// Trapezoidal integral of z^T Q z + u^T R u, where z stacks the deviations
/// the task defines a precision for (position: angles, velocities,
/// accelerations; velocity: velocities, accelerations; acceleration:
/// accelerations), Q is the block diagonal of those precisions and
/// R = P_u. This is the free-energy integrand doubled, minus the confidence
/// term, so confidence is the only thing it does not see.
double integral_quadratic_cost(const Trajectory& traj, const TaskSpec& task);

enum class ToolStatus { ok, integration_failure, singular_confidence };

inline const char* to_string(ToolStatus s) {
  switch (s) {
    case ToolStatus::ok: return "ok";
    case ToolStatus::integration_failure: return "integration_failure";
    case ToolStatus::singular_confidence: return "singular_confidence";
  }
  return "?";
}

struct ToolEvaluation {
  int tool_index = 0;
  ToolStatus status = ToolStatus::ok;
  double logdet = 0.0;
  /// Objective value under the report's objective; empty for excluded tools.
  std::optional<double> objective_value;
  /// Precision-weighted task error of the unperturbed run; empty when the
  /// objective never simulated the tool.
  std::optional<double> task_error;
};

struct SelectionReport {
  Objective objective = Objective::free_energy;
  std::vector<ToolEvaluation> tools;
  int chosen_index = -1;
};

/// Error raised when every candidate tool is excluded.
struct NoValidToolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluates every tool under the objective and picks the argmin (argmax of
/// logdet for confidence_only), ties broken by lowest index. Tools whose
/// simulation fails or whose posterior precision is singular are excluded
/// and recorded with a reason. free_energy and quadratic simulate each tool
/// once, unperturbed; confidence_only never touches the integrator.
SelectionReport select_tool(std::span<const ArmParamsd> tools,
                            const TaskSpec& task, Objective objective,
                            const SimConfig& cfg, int jobs = 1);

}  // namespace confctl

#endif  // CONFCTL_DECISION_HPP_
