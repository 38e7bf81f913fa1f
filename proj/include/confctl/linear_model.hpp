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

#ifndef CONFCTL_LINEAR_MODEL_HPP_
#define CONFCTL_LINEAR_MODEL_HPP_

#include "confctl/arm_dynamics.hpp"
#include "confctl/types.hpp"

namespace confctl {

/// Linearized plant x_dot = A (x - x_eq) + B u about the hanging
/// equilibrium. This is the model the agent uses for control and decision
/// making; the nonlinear equations remain the simulated plant.
///
/// Structure for every valid parameter set:
///   A = [ 0  I ]   B = [ 0 ]
///       [ K  0 ],      [ L ],
/// with K upper-triangular (strictly negative diagonal) and L
/// upper-triangular, so A is invertible.
template <typename Scalar>
struct StateSpace {
  Mat4<Scalar> A{Mat4<Scalar>::Zero()};
  Mat42<Scalar> B{Mat42<Scalar>::Zero()};
  Vec4<Scalar> x_eq{equilibrium_state<Scalar>()};
};

using StateSpaced = StateSpace<double>;

/// Closed-form Jacobians of the nonlinear dynamics at (x_eq, u = 0).
template <typename Scalar>
StateSpace<Scalar> linearize(const ArmParams<Scalar>& p) {
  require_valid(p);
  const Scalar m1 = p.m1, m2 = p.m2, l1 = p.l1, l2 = p.l2, g = p.g;
  const Scalar m13 = m1 + Scalar(3) * m2;

  StateSpace<Scalar> ss;
  ss.A(0, 2) = Scalar(1);
  ss.A(1, 3) = Scalar(1);
  ss.A(2, 0) = -Scalar(3) * (m1 + Scalar(2) * m2) * g /
               (Scalar(2) * l1 * m13);
  ss.A(2, 1) = Scalar(9) * m2 * g / (Scalar(4) * l1 * m13);
  ss.A(3, 1) = -Scalar(3) * g / (Scalar(2) * l2);

  ss.B(2, 0) = Scalar(3) / (l1 * l1 * m13);
  ss.B(2, 1) = -Scalar(3) * (Scalar(3) * l1 + Scalar(2) * l2) /
               (Scalar(2) * l1 * l1 * l2 * m13);
  ss.B(3, 1) = Scalar(3) / (m2 * l2 * l2);
  return ss;
}

}  // namespace confctl

#endif  // CONFCTL_LINEAR_MODEL_HPP_
