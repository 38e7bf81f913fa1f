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

#ifndef CONFCTL_CONTROLLER_HPP_
#define CONFCTL_CONTROLLER_HPP_

#include <vector>

#include "confctl/arm_dynamics.hpp"
#include "confctl/linear_model.hpp"
#include "confctl/ode.hpp"
#include "confctl/task.hpp"
#include "confctl/types.hpp"

namespace confctl {

/// Sensitivities of the task variables to the control torque under the
/// linear model. The agent assumes zero-jerk motion, which fixes
/// d(x_dot)/du to the stacked [I; I] pattern; the remaining matrices follow
/// from differentiating x_dot = A (x - x_eq) + B u.
///
/// Only the blocks a task's update law uses are populated:
///   position     -> dx_du (4x2), dtheta_du, dtheta_dot_du, dtheta_ddot_du
///   velocity     -> dtheta_dot_du, dtheta_ddot_du
///   acceleration -> dtheta_ddot_du
struct TaskPartials {
  TaskKind kind = TaskKind::position;
  Mat42d dx_du = Mat42d::Zero();
  Mat2d dtheta_du = Mat2d::Zero();
  Mat2d dtheta_dot_du = Mat2d::Zero();
  Mat2d dtheta_ddot_du = Mat2d::Zero();
};

/// The assumed d(x_dot)/du under zero jerk: each torque channel drives its
/// own joint's velocity and acceleration rows alike.
inline Mat42d stacked_identity() {
  Mat42d m;
  m << Mat2d::Identity(), Mat2d::Identity();
  return m;
}

TaskPartials task_partials(TaskKind kind, const StateSpaced& ss);

/// Instantaneous free energy: half the precision-weighted squared
/// deviations of angles, velocities, accelerations and torque from their
/// goals/prior, minus half the supplied log-determinant of the posterior
/// torque precision.
double free_energy(const TaskSpec& task, const Vec2d& theta,
                   const Vec2d& theta_dot, const Vec2d& theta_ddot,
                   const Vec2d& u, double logdet_pi);

/// Torque rate -gamma * dF/du of the gradient-descent controller. The
/// position task descends all four deviation terms; the velocity task the
/// last three; the acceleration task the last two.
Vec2d control_rate(const TaskSpec& task, const TaskPartials& partials,
                   const Vec2d& theta, const Vec2d& theta_dot,
                   const Vec2d& theta_ddot, const Vec2d& u, double gamma);

struct SimConfig {
  double horizon = 5.0;
  double dt_out = 0.05;
  Vec4d x0 = equilibrium_state<double>();
  Vec2d u0 = Vec2d(0.1, 0.1);
  double gamma = 1.0;
  double rtol = 1e-6;
  double atol = 1e-8;

  /// Number of output intervals; the grid has grid_points() + 1 samples.
  int grid_points() const;
};

/// Closed-loop record sampled on the uniform output grid: state, commanded
/// torque, plant acceleration (at the perturbed torque) and instantaneous
/// free energy.
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec4d> x;
  std::vector<Vec2d> u;
  std::vector<Vec2d> theta_ddot;
  std::vector<double> f;

  std::size_t size() const { return t.size(); }
};

struct SimResult {
  ode::Status status = ode::Status::ok;
  double failure_time = 0.0;
  Trajectory trajectory;

  bool ok() const { return status == ode::Status::ok; }
};

/// Integrates the coupled plant + controller system
///   x_dot = f_plant(x, u + perturbation),  u_dot = control_rate(...)
/// with adaptive Dormand-Prince steps, sampling on the dt_out grid. The
/// controller reads the plant's actual acceleration (perturbed torque); the
/// perturbation itself is invisible to the controller state.
SimResult simulate(const ArmParamsd& params, const StateSpaced& ss,
                   const TaskSpec& task, const SimConfig& cfg,
                   const Vec2d& perturbation);

}  // namespace confctl

#endif  // CONFCTL_CONTROLLER_HPP_
