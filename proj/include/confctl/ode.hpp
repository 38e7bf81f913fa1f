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

#ifndef CONFCTL_ODE_HPP_
#define CONFCTL_ODE_HPP_

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace confctl::ode {

struct Options {
  double rtol = 1e-6;
  double atol = 1e-8;
  double h_init = 1e-3;
  // Steps below h_min * max(1, |t|) count as underflow.
  double h_min = 1e-13;
  std::uint64_t max_steps = 2'000'000;
  // States with an entry beyond this magnitude are treated as divergent.
  double blowup = 1e9;
};

enum class Status { ok, step_underflow, diverged, step_budget_exhausted };

struct Result {
  Status status = Status::ok;
  double failure_time = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t steps = 0;
  std::uint64_t rhs_evals = 0;

  bool ok() const { return status == Status::ok; }
};

/// Number of integrate() calls made by this process. Lets tests assert that
/// selection paths advertised as simulation-free never touch the integrator.
inline std::atomic<std::uint64_t>& invocation_count() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

/// Dormand-Prince 5(4) with the standard embedded error estimate, FSAL, and
/// proportional step control. The solution is advanced continuously and
/// forced to land exactly on every entry of `grid` (which must be
/// increasing, starting at the initial time); `observer(k, t, y)` fires once
/// per grid point, including the first.
///
/// All arithmetic is plain double with a fixed evaluation order, so
/// identical inputs give bit-identical output.
template <int N, typename Rhs, typename Observer>
Result integrate(Rhs&& rhs, Eigen::Matrix<double, N, 1> y,
                 std::span<const double> grid, Observer&& observer,
                 const Options& opt = {}) {
  using Vec = Eigen::Matrix<double, N, 1>;
  invocation_count().fetch_add(1, std::memory_order_relaxed);

  Result res;
  if (grid.empty()) return res;

  // Butcher tableau (Dormand & Prince 1980).
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  // 5th-order minus 4th-order weights.
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = grid[0];
  observer(std::size_t{0}, t, y);

  Vec k1, k2, k3, k4, k5, k6, k7;
  k1 = rhs(t, y);
  ++res.rhs_evals;

  double h = opt.h_init;
  auto finite = [&](const Vec& v) {
    return v.allFinite() && v.template lpNorm<Eigen::Infinity>() < opt.blowup;
  };

  for (std::size_t gi = 1; gi < grid.size(); ++gi) {
    const double t_stop = grid[gi];
    while (t < t_stop) {
      if (res.steps >= opt.max_steps) {
        res.status = Status::step_budget_exhausted;
        res.failure_time = t;
        return res;
      }
      // Underflow is judged on the natural step size; clipping a healthy
      // step down to the sliver left before a grid point is not a failure.
      if (h < opt.h_min * std::max(1.0, std::abs(t))) {
        res.status = Status::step_underflow;
        res.failure_time = t;
        return res;
      }
      double h_step = h;
      bool clipped = false;
      if (t + h_step >= t_stop) {
        h_step = t_stop - t;
        clipped = true;
      }

      k2 = rhs(t + c2 * h_step, y + h_step * (a21 * k1));
      k3 = rhs(t + c3 * h_step, y + h_step * (a31 * k1 + a32 * k2));
      k4 = rhs(t + c4 * h_step, y + h_step * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = rhs(t + c5 * h_step,
               y + h_step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = rhs(t + h_step, y + h_step * (a61 * k1 + a62 * k2 + a63 * k3 +
                                         a64 * k4 + a65 * k5));
      Vec y_new =
          y + h_step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(t + h_step, y_new);
      res.rhs_evals += 6;
      ++res.steps;

      if (!finite(y_new)) {
        res.status = Status::diverged;
        res.failure_time = t;
        return res;
      }

      const Vec err_vec = h_step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                                    e6 * k6 + e7 * k7);
      double err = 0.0;
      for (int i = 0; i < N; ++i) {
        const double scale =
            opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double r = err_vec[i] / scale;
        err += r * r;
      }
      err = std::sqrt(err / N);

      if (err <= 1.0) {
        t = clipped ? t_stop : t + h_step;
        y = y_new;
        k1 = k7;  // FSAL
        if (!clipped) {
          const double fac =
              err == 0.0 ? 5.0
                         : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
          h = h_step * fac;
        }
      } else {
        const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        h = h_step * fac;
      }
    }
    observer(gi, t_stop, y);
  }
  return res;
}

}  // namespace confctl::ode

#endif  // CONFCTL_ODE_HPP_
