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

#ifndef CONFCTL_ARM_DYNAMICS_HPP_
#define CONFCTL_ARM_DYNAMICS_HPP_

#include <cmath>
#include <stdexcept>

#include "confctl/types.hpp"

namespace confctl {

/// Physical description of one 2DOF arm in the vertical plane: two uniform
/// links with masses m1, m2 (kg) and lengths l1, l2 (m). Each parameter set
/// defines one selectable tool.
template <typename Scalar>
struct ArmParams {
  Scalar m1{0};
  Scalar m2{0};
  Scalar l1{0};
  Scalar l2{0};
  Scalar g{Scalar(9.81)};

  bool valid() const {
    auto pos = [](Scalar v) { return std::isfinite(v) && v > Scalar(0); };
    return pos(m1) && pos(m2) && pos(l1) && pos(l2) && pos(g);
  }
};

using ArmParamsd = ArmParams<double>;

template <typename Scalar>
void require_valid(const ArmParams<Scalar>& p) {
  if (!p.valid()) {
    throw std::invalid_argument(
        "ArmParams: masses, lengths and g must be finite and > 0");
  }
}

/// Joint angles (rad) and angular velocities (rad/s).
template <typename Scalar>
struct JointState {
  Vec2<Scalar> theta{Vec2<Scalar>::Zero()};
  Vec2<Scalar> theta_dot{Vec2<Scalar>::Zero()};

  static JointState from_vec(const Vec4<Scalar>& x) {
    return {x.template head<2>(), x.template tail<2>()};
  }
  Vec4<Scalar> to_vec() const {
    Vec4<Scalar> x;
    x << theta, theta_dot;
    return x;
  }
};

using JointStated = JointState<double>;

/// Hanging equilibrium X^e = [-pi/2, -pi/2, 0, 0]: both links straight down,
/// at rest. The zero-torque dynamics vanish identically there.
template <typename Scalar>
Vec4<Scalar> equilibrium_state() {
  Vec4<Scalar> x;
  x << -half_pi<Scalar>, -half_pi<Scalar>, Scalar(0), Scalar(0);
  return x;
}

namespace detail {

// cos(theta) evaluated as sin(theta + pi/2). Equal to std::cos to within one
// rounding of the pi/2 constant, but exactly zero at theta = -pi/2 (the
// representable equilibrium angle), so the gravity torque vanishes bitwise
// at the hanging configuration.
template <typename Scalar>
Scalar gravity_cos(Scalar theta) {
  return std::sin(theta + half_pi<Scalar>);
}

}  // namespace detail

/// Joint angular accelerations [th1_dd, th2_dd] of the nonlinear arm under
/// torques [T1, T2]. Link 2 decouples:
///   (1/3) m2 l2^2 th2_dd = T2 - (1/2) m2 g l2 cos(th2),
/// and th1_dd follows from the rearranged link-1 moment balance after
/// substituting th2_dd.
template <typename Scalar>
Vec2<Scalar> angular_accel(const ArmParams<Scalar>& p,
                           const JointState<Scalar>& s,
                           const Vec2<Scalar>& torque) {
  const Scalar th1 = s.theta[0], th2 = s.theta[1];
  const Scalar w1 = s.theta_dot[0], w2 = s.theta_dot[1];
  const Scalar t1 = torque[0], t2 = torque[1];

  const Scalar link2_drive = t2 - Scalar(0.5) * p.m2 * p.g * p.l2 *
                                      detail::gravity_cos(th2);
  const Scalar th2_dd = Scalar(3) / (p.m2 * p.l2 * p.l2) * link2_drive;

  const Scalar s12 = std::sin(th1 - th2);
  const Scalar c12 = std::cos(th1 - th2);
  const Scalar inertia1 = (p.m1 / Scalar(3) + p.m2) * p.l1 * p.l1;
  const Scalar bracket =
      p.m2 * p.l1 * p.l1 * w1 * w1 * s12 + t2 - t1 +
      (Scalar(3) * p.l1 / (Scalar(2) * p.l2)) * c12 * link2_drive +
      Scalar(0.5) * p.m2 * p.l1 * p.l2 * w2 * w2 * s12 +
      (p.m1 / Scalar(2) + p.m2) * p.g * p.l1 * detail::gravity_cos(th1);
  const Scalar th1_dd = -bracket / inertia1;

  return Vec2<Scalar>(th1_dd, th2_dd);
}

/// State derivative [theta_dot; angular_accel] with the perturbation torque
/// added to the applied torque. The perturbation models an unmodelled
/// constant external torque acting on the joints.
template <typename Scalar>
Vec4<Scalar> dynamics_rhs(const ArmParams<Scalar>& p,
                          const JointState<Scalar>& s,
                          const Vec2<Scalar>& torque,
                          const Vec2<Scalar>& perturbation) {
  Vec4<Scalar> dx;
  dx.template head<2>() = s.theta_dot;
  dx.template tail<2>() =
      angular_accel<Scalar>(p, s, torque + perturbation);
  return dx;
}

}  // namespace confctl

#endif  // CONFCTL_ARM_DYNAMICS_HPP_
