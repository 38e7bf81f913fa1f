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

#include "confctl/confidence.hpp"

#include <cmath>
#include <limits>

#include "confctl/controller.hpp"

namespace confctl {

namespace {

constexpr double kSingularTol = 1e-10;

// Eigenvalues of a symmetric 2x2 matrix, ascending.
Vec2d sym_eigenvalues(const Mat2d& m) {
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = std::sqrt(std::max(0.0, mean * mean - det));
  return Vec2d(mean - disc, mean + disc);
}

ControlConfidence finish(Mat2d pi) {
  // The Gram + diagonal structure is symmetric in exact arithmetic;
  // symmetrize away the rounding residue of the matrix products.
  pi = (0.5 * (pi + pi.transpose())).eval();
  ControlConfidence c;
  c.pi_u = pi;
  const Vec2d ev = sym_eigenvalues(pi);
  c.positive_definite = ev[0] > kSingularTol;
  c.logdet = c.positive_definite
                 ? std::log(pi(0, 0) * pi(1, 1) - pi(0, 1) * pi(1, 0))
                 : -std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace

ControlConfidence control_confidence(TaskKind kind, const StateSpaced& ss,
                                     const TaskSpec& task) {
  Eigen::FullPivLU<Mat4d> lu(ss.A);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("control_confidence: singular A matrix");
  }
  switch (kind) {
    case TaskKind::position: {
      const Mat42d g = lu.solve(stacked_identity() - ss.B);
      Eigen::Matrix4d p_x = Eigen::Matrix4d::Zero();
      p_x.topLeftCorner<2, 2>() = task.p_theta;
      p_x.bottomRightCorner<2, 2>() = task.p_theta_dot;
      return finish(g.transpose() * p_x * g + task.p_theta_ddot + task.p_u);
    }
    case TaskKind::velocity: {
      const Mat2d m = lu.solve(ss.B).topRows<2>();
      return finish(m.transpose() * task.p_theta_dot * m +
                    task.p_theta_ddot + task.p_u);
    }
    case TaskKind::acceleration: {
      const Mat2d d = task_partials(kind, ss).dtheta_ddot_du;
      return finish(d.transpose() * task.p_theta_ddot * d + task.p_u);
    }
  }
  return {};
}

double confidence_scalar(const ControlConfidence& conf) {
  return conf.logdet;
}

double w_correction(const ControlConfidence& conf, const Mat2d& e_hessian) {
  return 0.5 * conf.pi_u.inverse().cwiseProduct(e_hessian.transpose()).sum();
}

}  // namespace confctl
