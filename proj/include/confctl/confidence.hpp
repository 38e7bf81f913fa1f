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

#ifndef CONFCTL_CONFIDENCE_HPP_
#define CONFCTL_CONFIDENCE_HPP_

#include "confctl/linear_model.hpp"
#include "confctl/task.hpp"
#include "confctl/types.hpp"

namespace confctl {

/// Posterior precision of the control torque (the curvature of the free
/// energy in u). Depends only on the tool's (A, B) and the task precisions,
/// so it is constant during operation and can be precomputed.
struct ControlConfidence {
  Mat2d pi_u = Mat2d::Zero();
  /// ln det(pi_u); -inf when pi_u is singular to tolerance.
  double logdet = 0.0;
  bool positive_definite = false;
};

/// Closed-form posterior torque precision for one task on one tool.
///   position:     G^T blkdiag(P_theta, P_theta_dot) G + P_tddot + P_u,
///                 G = A^-1 (dxdot_du - B)
///   velocity:     M^T P_theta_dot M + P_tddot + P_u,  M = [I 0] A^-1 B
///   acceleration: D^T P_tddot D + P_u,  D = dtheta_ddot_du
/// Eigenvalues below 1e-10 mark the result singular; its logdet is then
/// -inf and confidence-based rankings must exclude the tool.
ControlConfidence control_confidence(TaskKind kind, const StateSpaced& ss,
                                     const TaskSpec& task);

/// Scalar summary: ln det(pi_u), the exact confidence term inside the free
/// energy. -inf for singular input.
double confidence_scalar(const ControlConfidence& conf);

/// The dropped second-order correction tr(pi_u^-1 H)/2, where H is the
/// curvature of the expected-energy term. With the closed-form posterior H
/// equals pi_u, making the correction identically 1; kept as a reporting
/// diagnostic only and never added to the free energy.
double w_correction(const ControlConfidence& conf, const Mat2d& e_hessian);

}  // namespace confctl

#endif  // CONFCTL_CONFIDENCE_HPP_
