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

#ifndef CONFCTL_VALIDATION_HPP_
#define CONFCTL_VALIDATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace confctl {

/// One analytic identity check: the closed-form implementation against an
/// independent numerical oracle.
struct ValidationCheck {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

/// Runs the full identity suite: exact equilibrium dynamics, closed-form
/// (A, B) against central-difference Jacobians (200 tools, 1e-5), the
/// controller gradient against finite differences of the model-implied free
/// energy (100 configurations per task, 1e-5) and the closed-form posterior
/// precision against a finite-difference Hessian (100 tools per task,
/// 1e-5). `inject_fault` perturbs one closed-form constant inside the
/// Jacobian check so the suite's failure path can be exercised.
ValidationReport run_validation(std::uint64_t seed = 2026,
                                bool inject_fault = false);

}  // namespace confctl

#endif  // CONFCTL_VALIDATION_HPP_
