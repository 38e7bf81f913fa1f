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

#include "confctl/validation.hpp"

#include <cmath>

#include "confctl/confidence.hpp"
#include "confctl/controller.hpp"
#include "confctl/experiments.hpp"

namespace confctl {

namespace {

constexpr std::uint32_t kValTag = 0x56414C44;  // "VALD"

ArmParamsd random_params(std::mt19937_64& gen) {
  ArmParamsd p;
  p.m1 = uniform(gen, 0.1, 0.6);
  p.m2 = uniform(gen, 0.1, 0.6);
  p.l1 = uniform(gen, 0.1, 0.6);
  p.l2 = uniform(gen, 0.1, 0.6);
  return p;
}

// Random PSD-by-construction task: diagonal precisions on the terms the
// kind activates, random finite goals.
TaskSpec random_task(TaskKind kind, std::mt19937_64& gen) {
  TaskSpec t;
  t.kind = kind;
  auto d2 = [&](double lo, double hi) {
    return Vec2d(uniform(gen, lo, hi), uniform(gen, lo, hi));
  };
  t.theta_ddot_goal = d2(-2.0, 2.0);
  t.p_theta_ddot = d2(0.1, 10.0).asDiagonal();
  if (kind != TaskKind::acceleration) {
    t.theta_dot_goal = d2(-2.0, 2.0);
    t.p_theta_dot = d2(0.1, 100.0).asDiagonal();
    t.p_u = d2(0.1, 2.0).asDiagonal();
  }
  if (kind == TaskKind::position) {
    t.theta_goal = d2(-2.0, 2.0);
    t.p_theta = d2(0.1, 100.0).asDiagonal();
  }
  return t;
}

// Free energy as a function of u alone, with the task variables depending
// on u linearly through the agent's partials.
double model_implied_f(const TaskSpec& task, const TaskPartials& partials,
                       const Vec2d& theta0, const Vec2d& theta_dot0,
                       const Vec2d& theta_ddot0, const Vec2d& u0,
                       const Vec2d& u) {
  const Vec2d du = u - u0;
  const Vec2d theta = theta0 + partials.dtheta_du * du;
  const Vec2d theta_dot = theta_dot0 + partials.dtheta_dot_du * du;
  const Vec2d theta_ddot = theta_ddot0 + partials.dtheta_ddot_du * du;
  return free_energy(task, theta, theta_dot, theta_ddot, u, 0.0);
}

ValidationCheck check_equilibrium(std::uint64_t seed) {
  ValidationCheck c;
  c.name = "equilibrium_zero_dynamics";
  c.tolerance = 0.0;
  c.detail = "angular_accel at X_e with zero torque, 200 random tools";
  std::mt19937_64 gen = make_stream(seed, kValTag, 0);
  double max_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ArmParamsd p = random_params(gen);
    const Vec2d acc = angular_accel<double>(
        p, JointStated::from_vec(equilibrium_state<double>()), Vec2d::Zero());
    max_err = std::max({max_err, std::abs(acc[0]), std::abs(acc[1])});
  }
  c.max_error = max_err;
  c.passed = max_err == 0.0;
  return c;
}

ValidationCheck check_jacobians(std::uint64_t seed, bool inject_fault) {
  ValidationCheck c;
  c.name = "closed_form_jacobians";
  c.tolerance = 1e-5;
  c.detail = "A, B vs central differences at the equilibrium, 200 tools";
  std::mt19937_64 gen = make_stream(seed, kValTag, 1);
  const double h = 1e-6;
  double max_err = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ArmParamsd p = random_params(gen);
    StateSpaced ss = linearize(p);
    if (inject_fault) ss.A(2, 0) *= 1.001;
    const Vec4d xe = equilibrium_state<double>();
    for (int j = 0; j < 4; ++j) {
      Vec4d dx = Vec4d::Zero();
      dx[j] = h;
      const Vec4d col =
          (dynamics_rhs<double>(p, JointStated::from_vec(xe + dx),
                                Vec2d::Zero(), Vec2d::Zero()) -
           dynamics_rhs<double>(p, JointStated::from_vec(xe - dx),
                                Vec2d::Zero(), Vec2d::Zero())) /
          (2.0 * h);
      max_err = std::max(
          max_err, (col - ss.A.col(j)).lpNorm<Eigen::Infinity>());
    }
    for (int j = 0; j < 2; ++j) {
      Vec2d du = Vec2d::Zero();
      du[j] = h;
      const Vec4d col = (dynamics_rhs<double>(p, JointStated::from_vec(xe),
                                              du, Vec2d::Zero()) -
                         dynamics_rhs<double>(p, JointStated::from_vec(xe),
                                              -du, Vec2d::Zero())) /
                        (2.0 * h);
      max_err = std::max(
          max_err, (col - ss.B.col(j)).lpNorm<Eigen::Infinity>());
    }
  }
  c.max_error = max_err;
  c.passed = max_err <= c.tolerance;
  return c;
}

ValidationCheck check_gradient(TaskKind kind, std::uint64_t seed) {
  ValidationCheck c;
  c.name = std::string("controller_gradient_") + to_string(kind);
  c.tolerance = 1e-5;
  c.detail = "control_rate vs finite differences, 100 configurations";
  std::mt19937_64 gen =
      make_stream(seed, kValTag, 10 + static_cast<int>(kind));
  const double h = 1e-6;
  double max_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ArmParamsd p = random_params(gen);
    const StateSpaced ss = linearize(p);
    const TaskPartials partials = task_partials(kind, ss);
    const TaskSpec task = random_task(kind, gen);
    const Vec2d theta(uniform(gen, -3.0, 3.0), uniform(gen, -3.0, 3.0));
    const Vec2d theta_dot(uniform(gen, -3.0, 3.0), uniform(gen, -3.0, 3.0));
    const Vec2d theta_ddot(uniform(gen, -8.0, 8.0), uniform(gen, -8.0, 8.0));
    const Vec2d u0(uniform(gen, -4.0, 4.0), uniform(gen, -4.0, 4.0));

    const Vec2d rate =
        control_rate(task, partials, theta, theta_dot, theta_ddot, u0, 1.0);
    Vec2d fd_grad;
    for (int j = 0; j < 2; ++j) {
      Vec2d du = Vec2d::Zero();
      du[j] = h;
      fd_grad[j] = (model_implied_f(task, partials, theta, theta_dot,
                                    theta_ddot, u0, u0 + du) -
                    model_implied_f(task, partials, theta, theta_dot,
                                    theta_ddot, u0, u0 - du)) /
                   (2.0 * h);
    }
    max_err =
        std::max(max_err, (rate + fd_grad).lpNorm<Eigen::Infinity>());
  }
  c.max_error = max_err;
  c.passed = max_err <= c.tolerance;
  return c;
}

ValidationCheck check_hessian(TaskKind kind, std::uint64_t seed) {
  ValidationCheck c;
  c.name = std::string("confidence_hessian_") + to_string(kind);
  c.tolerance = 1e-5;
  c.detail = "closed-form posterior precision vs FD Hessian, 100 tools";
  std::mt19937_64 gen =
      make_stream(seed, kValTag, 20 + static_cast<int>(kind));
  const double h = 1e-3;
  double max_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ArmParamsd p = random_params(gen);
    const StateSpaced ss = linearize(p);
    const TaskPartials partials = task_partials(kind, ss);
    const TaskSpec task = random_task(kind, gen);
    // The free energy is quadratic in u, so its Hessian is the same
    // everywhere; differencing about the goal keeps the quadratic's large
    // constant part out of the second differences, which would otherwise
    // swamp them with rounding noise for stiff tools.
    const Vec2d theta = task.theta_goal;
    const Vec2d theta_dot = task.theta_dot_goal;
    const Vec2d theta_ddot = task.theta_ddot_goal;
    const Vec2d u0 = task.eta_u;

    const ControlConfidence conf = control_confidence(kind, ss, task);
    auto f = [&](const Vec2d& u) {
      return model_implied_f(task, partials, theta, theta_dot, theta_ddot,
                             u0, u);
    };
    Mat2d hess;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        Vec2d ea = Vec2d::Zero(), eb = Vec2d::Zero();
        ea[a] = h;
        eb[b] = h;
        hess(a, b) = (f(u0 + ea + eb) - f(u0 + ea - eb) - f(u0 - ea + eb) +
                      f(u0 - ea - eb)) /
                     (4.0 * h * h);
      }
    }
    max_err =
        std::max(max_err, (hess - conf.pi_u).lpNorm<Eigen::Infinity>());
  }
  c.max_error = max_err;
  c.passed = max_err <= c.tolerance;
  return c;
}

}  // namespace

ValidationReport run_validation(std::uint64_t seed, bool inject_fault) {
  ValidationReport report;
  report.checks.push_back(check_equilibrium(seed));
  report.checks.push_back(check_jacobians(seed, inject_fault));
  for (const TaskKind kind :
       {TaskKind::position, TaskKind::velocity, TaskKind::acceleration}) {
    report.checks.push_back(check_gradient(kind, seed));
  }
  for (const TaskKind kind :
       {TaskKind::position, TaskKind::velocity, TaskKind::acceleration}) {
    report.checks.push_back(check_hessian(kind, seed));
  }
  return report;
}

}  // namespace confctl
