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

#include "confctl/controller.hpp"

#include <cmath>
#include <stdexcept>

#include "confctl/confidence.hpp"

namespace confctl {

TaskPartials task_partials(TaskKind kind, const StateSpaced& ss) {
  Eigen::FullPivLU<Mat4d> lu(ss.A);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("task_partials: singular A matrix");
  }

  TaskPartials p;
  p.kind = kind;
  switch (kind) {
    case TaskKind::position: {
      p.dx_du = lu.solve(stacked_identity() - ss.B);
      p.dtheta_du = p.dx_du.topRows<2>();
      p.dtheta_dot_du = p.dx_du.bottomRows<2>();
      p.dtheta_ddot_du = Mat2d::Identity();
      break;
    }
    case TaskKind::velocity: {
      Mat42d a_inv_b = lu.solve(ss.B);
      p.dtheta_dot_du = -a_inv_b.topRows<2>();
      p.dtheta_ddot_du = Mat2d::Identity();
      break;
    }
    case TaskKind::acceleration: {
      Mat42d dx_du = lu.solve(stacked_identity() - ss.B);
      Mat42d dxddot_du = ss.A * ss.A * dx_du + ss.A * ss.B;
      p.dtheta_ddot_du = dxddot_du.topRows<2>();
      break;
    }
  }
  return p;
}

double free_energy(const TaskSpec& task, const Vec2d& theta,
                   const Vec2d& theta_dot, const Vec2d& theta_ddot,
                   const Vec2d& u, double logdet_pi) {
  const Vec2d d_th = theta - task.theta_goal;
  const Vec2d d_thd = theta_dot - task.theta_dot_goal;
  const Vec2d d_thdd = theta_ddot - task.theta_ddot_goal;
  const Vec2d d_u = u - task.eta_u;
  const double quad = d_th.dot(task.p_theta * d_th) +
                      d_thd.dot(task.p_theta_dot * d_thd) +
                      d_thdd.dot(task.p_theta_ddot * d_thdd) +
                      d_u.dot(task.p_u * d_u);
  return 0.5 * (quad - logdet_pi);
}

Vec2d control_rate(const TaskSpec& task, const TaskPartials& partials,
                   const Vec2d& theta, const Vec2d& theta_dot,
                   const Vec2d& theta_ddot, const Vec2d& u, double gamma) {
  Vec2d grad = task.p_u * (u - task.eta_u);
  grad += partials.dtheta_ddot_du.transpose() *
          (task.p_theta_ddot * (theta_ddot - task.theta_ddot_goal));
  if (partials.kind != TaskKind::acceleration) {
    grad += partials.dtheta_dot_du.transpose() *
            (task.p_theta_dot * (theta_dot - task.theta_dot_goal));
  }
  if (partials.kind == TaskKind::position) {
    grad += partials.dtheta_du.transpose() *
            (task.p_theta * (theta - task.theta_goal));
  }
  return -gamma * grad;
}

int SimConfig::grid_points() const {
  if (!(horizon > 0.0) || !(dt_out > 0.0)) {
    throw std::invalid_argument("SimConfig: horizon and dt_out must be > 0");
  }
  const double ratio = horizon / dt_out;
  const int n = static_cast<int>(std::llround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(
        "SimConfig: horizon must be an integer multiple of dt_out");
  }
  return n;
}

SimResult simulate(const ArmParamsd& params, const StateSpaced& ss,
                   const TaskSpec& task, const SimConfig& cfg,
                   const Vec2d& perturbation) {
  require_valid(params);
  const int n = cfg.grid_points();
  const TaskPartials partials = task_partials(task.kind, ss);
  const ControlConfidence conf = control_confidence(task.kind, ss, task);

  // Coupled state y = [x; u].
  auto rhs = [&](double /*t*/, const Vec6d& y) -> Vec6d {
    const JointStated js = JointStated::from_vec(y.head<4>());
    const Vec2d u = y.tail<2>();
    const Vec2d accel = angular_accel<double>(params, js, u + perturbation);
    Vec6d dy;
    dy.head<2>() = js.theta_dot;
    dy.segment<2>(2) = accel;
    dy.tail<2>() = control_rate(task, partials, js.theta, js.theta_dot,
                                accel, u, cfg.gamma);
    return dy;
  };

  std::vector<double> grid(n + 1);
  for (int k = 0; k <= n; ++k) grid[k] = k * cfg.dt_out;

  SimResult res;
  Trajectory& traj = res.trajectory;
  traj.t.reserve(grid.size());
  traj.x.reserve(grid.size());
  traj.u.reserve(grid.size());
  traj.theta_ddot.reserve(grid.size());
  traj.f.reserve(grid.size());

  Vec6d y0;
  y0 << cfg.x0, cfg.u0;

  ode::Options opt;
  opt.rtol = cfg.rtol;
  opt.atol = cfg.atol;
  auto record = [&](std::size_t /*k*/, double t, const Vec6d& y) {
    const JointStated js = JointStated::from_vec(y.head<4>());
    const Vec2d u = y.tail<2>();
    const Vec2d accel = angular_accel<double>(params, js, u + perturbation);
    traj.t.push_back(t);
    traj.x.push_back(y.head<4>());
    traj.u.push_back(u);
    traj.theta_ddot.push_back(accel);
    traj.f.push_back(
        free_energy(task, js.theta, js.theta_dot, accel, u, conf.logdet));
  };

  const ode::Result r = ode::integrate<6>(rhs, y0, grid, record, opt);
  res.status = r.status;
  res.failure_time = r.failure_time;
  if (!r.ok()) {
    res.trajectory = Trajectory{};
  }
  return res;
}

}  // namespace confctl
