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
#include <random>

#include "confctl/confidence.hpp"
#include "confctl/experiments.hpp"
#include "doctest.h"

using namespace confctl;

namespace {

ArmParamsd random_params(std::mt19937_64& gen) {
  ArmParamsd p;
  p.m1 = uniform(gen, 0.1, 0.6);
  p.m2 = uniform(gen, 0.1, 0.6);
  p.l1 = uniform(gen, 0.1, 0.6);
  p.l2 = uniform(gen, 0.1, 0.6);
  return p;
}

// Plain Gaussian elimination with partial pivoting; the independent
// linear-solve oracle for A^-1 * rhs.
Vec4d gauss_solve(Mat4d a, Vec4d b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    a.row(col).swap(a.row(piv));
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
      b[r] -= f * b[col];
    }
  }
  Vec4d x;
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

TaskSpec random_task(TaskKind kind, std::mt19937_64& gen) {
  TaskSpec t;
  t.kind = kind;
  auto d2 = [&](double lo, double hi) {
    return Vec2d(uniform(gen, lo, hi), uniform(gen, lo, hi));
  };
  t.theta_ddot_goal = d2(-1.0, 1.0);
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

// Free energy with the task variables tied to u through the task's own
// partials; the function whose u-gradient the controller must descend.
double implied_f(const TaskSpec& task, const TaskPartials& pp,
                 const Vec2d& th0, const Vec2d& thd0, const Vec2d& thdd0,
                 const Vec2d& u0, const Vec2d& u) {
  const Vec2d du = u - u0;
  return free_energy(task, th0 + pp.dtheta_du * du,
                     thd0 + pp.dtheta_dot_du * du,
                     thdd0 + pp.dtheta_ddot_du * du, u, 0.0);
}

}  // namespace

TEST_CASE("position partials") {
  std::mt19937_64 gen(60);
  const StateSpaced ss = linearize(random_params(gen));
  const TaskPartials pp = task_partials(TaskKind::position, ss);

  CHECK(pp.dtheta_ddot_du == Mat2d::Identity());

  // dx_du = A^-1 (dxdot_du - B), column by column against Gaussian
  // elimination.
  const Mat42d rhs = stacked_identity() - ss.B;
  for (int j = 0; j < 2; ++j) {
    const Vec4d col = gauss_solve(ss.A, rhs.col(j));
    CHECK((pp.dx_du.col(j) - col).lpNorm<Eigen::Infinity>() < 1e-10);
  }
  CHECK(pp.dtheta_du == Mat2d(pp.dx_du.topRows<2>()));
  CHECK(pp.dtheta_dot_du == Mat2d(pp.dx_du.bottomRows<2>()));
}

TEST_CASE("velocity partials against the linear-solve oracle") {
  std::mt19937_64 gen(61);
  for (int i = 0; i < 20; ++i) {
    const StateSpaced ss = linearize(random_params(gen));
    const TaskPartials pp = task_partials(TaskKind::velocity, ss);
    for (int j = 0; j < 2; ++j) {
      const Vec4d col = gauss_solve(ss.A, ss.B.col(j));
      CHECK(pp.dtheta_dot_du(0, j) == doctest::Approx(-col[0]).epsilon(1e-9));
      CHECK(pp.dtheta_dot_du(1, j) == doctest::Approx(-col[1]).epsilon(1e-9));
    }
    CHECK(pp.dtheta_ddot_du == Mat2d::Identity());
  }
}

TEST_CASE("acceleration partial simplifies to the top of A * dxdot_du") {
  std::mt19937_64 gen(62);
  for (int i = 0; i < 20; ++i) {
    const StateSpaced ss = linearize(random_params(gen));
    const TaskPartials pp = task_partials(TaskKind::acceleration, ss);
    // A^2 A^-1 (dxdot - B) + A B = A dxdot; restricted to the top rows.
    const Mat42d direct = ss.A * stacked_identity();
    CHECK((pp.dtheta_ddot_du - direct.topRows<2>()).lpNorm<Eigen::Infinity>()
          < 1e-9);
    // With the top-right identity block of A this is exactly the identity.
    CHECK((pp.dtheta_ddot_du - Mat2d::Identity()).lpNorm<Eigen::Infinity>()
          < 1e-9);
  }
}

TEST_CASE("free energy closed-form values") {
  const TaskSpec task1 = default_task(TaskKind::position);

  SUBCASE("all terms at their targets leave only the confidence term") {
    const double L = 1.7;
    const double f =
        free_energy(task1, task1.theta_goal, task1.theta_dot_goal,
                    task1.theta_ddot_goal, task1.eta_u, L);
    CHECK(f == doctest::Approx(-L / 2).epsilon(1e-15));
  }

  SUBCASE("quadratic scaling of the position deviation") {
    TaskSpec t = task1;
    t.p_theta_dot.setZero();
    t.p_theta_ddot.setZero();
    t.p_u.setZero();
    const Vec2d d(0.3, -0.2);
    const double f1 = free_energy(t, t.theta_goal + d, Vec2d::Zero(),
                                  Vec2d::Zero(), Vec2d::Zero(), 0.0);
    const double f2 = free_energy(t, t.theta_goal + 2 * d, Vec2d::Zero(),
                                  Vec2d::Zero(), Vec2d::Zero(), 0.0);
    CHECK(f2 == doctest::Approx(4.0 * f1).epsilon(1e-13));
  }

  SUBCASE("reference position task at the origin") {
    // Hand evaluation: 0.5 * [100 ((pi/3)^2 + (pi/6)^2) + 0.1^2 + 0.1^2].
    const double pi = std::numbers::pi;
    const double expected =
        0.5 * (100.0 * (pi * pi / 9.0 + pi * pi / 36.0) + 0.02);
    const double f = free_energy(task1, Vec2d::Zero(), Vec2d::Zero(),
                                 Vec2d::Zero(), Vec2d(0.1, 0.1), 0.0);
    CHECK(f == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("control rate vanishes where it should") {
  std::mt19937_64 gen(63);
  const StateSpaced ss = linearize(random_params(gen));

  SUBCASE("all precisions zero") {
    TaskSpec t;
    t.kind = TaskKind::position;
    const TaskPartials pp = task_partials(t.kind, ss);
    const Vec2d rate = control_rate(t, pp, Vec2d(1.0, -2.0), Vec2d(0.5, 0.1),
                                    Vec2d(3.0, -1.0), Vec2d(2.0, 2.0), 1.0);
    CHECK(rate == Vec2d::Zero());
  }

  SUBCASE("exact goal with u at the prior mean") {
    for (const TaskKind kind : {TaskKind::position, TaskKind::velocity,
                                TaskKind::acceleration}) {
      const TaskSpec t = default_task(kind);
      const TaskPartials pp = task_partials(kind, ss);
      const Vec2d rate =
          control_rate(t, pp, t.theta_goal, t.theta_dot_goal,
                       t.theta_ddot_goal, t.eta_u, 1.0);
      CHECK(rate == Vec2d::Zero());
    }
  }
}

TEST_CASE("control rate equals the finite-difference free-energy gradient") {
  std::mt19937_64 gen(64);
  const double h = 1e-6;
  for (const TaskKind kind :
       {TaskKind::position, TaskKind::velocity, TaskKind::acceleration}) {
    for (int i = 0; i < 100; ++i) {
      const StateSpaced ss = linearize(random_params(gen));
      const TaskPartials pp = task_partials(kind, ss);
      const TaskSpec task = random_task(kind, gen);
      const Vec2d th(uniform(gen, -3.0, 3.0), uniform(gen, -3.0, 3.0));
      const Vec2d thd(uniform(gen, -3.0, 3.0), uniform(gen, -3.0, 3.0));
      const Vec2d thdd(uniform(gen, -8.0, 8.0), uniform(gen, -8.0, 8.0));
      const Vec2d u0(uniform(gen, -4.0, 4.0), uniform(gen, -4.0, 4.0));
      const double gamma = uniform(gen, 0.5, 2.0);

      const Vec2d rate = control_rate(task, pp, th, thd, thdd, u0, gamma);
      Vec2d fd;
      for (int j = 0; j < 2; ++j) {
        Vec2d e = Vec2d::Zero();
        e[j] = h;
        fd[j] = (implied_f(task, pp, th, thd, thdd, u0, u0 + e) -
                 implied_f(task, pp, th, thd, thdd, u0, u0 - e)) /
                (2.0 * h);
      }
      CHECK((rate + gamma * fd).lpNorm<Eigen::Infinity>() < 1e-5);
    }
  }
}

TEST_CASE("simulate: zero-precision task freezes the controller") {
  std::mt19937_64 gen(65);
  const ArmParamsd p = random_params(gen);
  TaskSpec t;
  t.kind = TaskKind::velocity;
  SimConfig cfg;
  const SimResult res = simulate(p, linearize(p), t, cfg, Vec2d::Zero());
  REQUIRE(res.ok());
  for (const Vec2d& u : res.trajectory.u) {
    CHECK(u == cfg.u0);
  }
  // Zero precisions give a singular posterior: the recorded free energy
  // carries the -inf logdet honestly.
  CHECK(std::isinf(res.trajectory.f.front()));
}

TEST_CASE("simulate: grid contract") {
  std::mt19937_64 gen(66);
  const ArmParamsd p = random_params(gen);
  const TaskSpec t = default_task(TaskKind::velocity);
  SimConfig cfg;
  const SimResult res = simulate(p, linearize(p), t, cfg, Vec2d::Zero());
  REQUIRE(res.ok());
  const Trajectory& tr = res.trajectory;
  CHECK(tr.size() == 101);
  CHECK(tr.x.size() == 101);
  CHECK(tr.u.size() == 101);
  CHECK(tr.theta_ddot.size() == 101);
  CHECK(tr.f.size() == 101);
  CHECK(tr.t.front() == 0.0);
  CHECK(tr.t.back() == doctest::Approx(5.0).epsilon(1e-12));
  for (std::size_t k = 1; k < tr.size(); ++k) {
    CHECK(tr.t[k] - tr.t[k - 1] == doctest::Approx(0.05).epsilon(1e-9));
  }
}

TEST_CASE("simulate: position task settles near the goal on a good tool") {
  // Mid-range tool from the seeded pilot batch; final angle error is well
  // under the 0.15 rad bound.
  ArmParamsd p;
  p.m1 = 0.4;
  p.m2 = 0.4;
  p.l1 = 0.4;
  p.l2 = 0.4;
  const TaskSpec t = default_task(TaskKind::position);
  const SimResult res = simulate(p, linearize(p), t, SimConfig{}, Vec2d::Zero());
  REQUIRE(res.ok());
  const Vec2d final_theta = res.trajectory.x.back().head<2>();
  CHECK((final_theta - t.theta_goal).norm() < 0.15);
}

TEST_CASE("simulate: bit-identical reruns") {
  std::mt19937_64 gen(67);
  const ArmParamsd p = random_params(gen);
  const TaskSpec t = default_task(TaskKind::velocity);
  const StateSpaced ss = linearize(p);
  const SimResult a = simulate(p, ss, t, SimConfig{}, Vec2d(-0.8, -0.8));
  const SimResult b = simulate(p, ss, t, SimConfig{}, Vec2d(-0.8, -0.8));
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.trajectory.t == b.trajectory.t);
  CHECK(a.trajectory.x == b.trajectory.x);
  CHECK(a.trajectory.u == b.trajectory.u);
  CHECK(a.trajectory.theta_ddot == b.trajectory.theta_ddot);
  CHECK(a.trajectory.f == b.trajectory.f);
}

TEST_CASE("simulate: impossible tolerances surface as a failure") {
  std::mt19937_64 gen(68);
  const ArmParamsd p = random_params(gen);
  const TaskSpec t = default_task(TaskKind::velocity);
  SimConfig cfg;
  cfg.rtol = 1e-300;  // below what rounding noise can ever satisfy
  cfg.atol = 1e-300;
  const SimResult res = simulate(p, linearize(p), t, cfg, Vec2d::Zero());
  CHECK(!res.ok());
  CHECK(std::isfinite(res.failure_time));
  CHECK(res.trajectory.size() == 0);
}

TEST_CASE("SimConfig grid validation") {
  SimConfig cfg;
  CHECK(cfg.grid_points() == 100);
  cfg.dt_out = 0.3;
  CHECK_THROWS_AS(cfg.grid_points(), std::invalid_argument);
  cfg.dt_out = -0.05;
  CHECK_THROWS_AS(cfg.grid_points(), std::invalid_argument);
}
