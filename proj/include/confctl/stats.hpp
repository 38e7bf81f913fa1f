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

#ifndef CONFCTL_STATS_HPP_
#define CONFCTL_STATS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace confctl::stats {

double mean(std::span<const double> xs);
double stddev(std::span<const double> xs);
/// Linear-interpolated quantile (the common "type 7" definition).
double quantile(std::span<const double> xs, double q);
double median(std::span<const double> xs);
double iqr(std::span<const double> xs);
/// Dispersion relative to location: stddev / |mean|.
double coefficient_of_variation(std::span<const double> xs);

/// Average ranks (ties share the mean of their positions), 1-based.
std::vector<double> average_ranks(std::span<const double> xs);

/// Spearman rank correlation with average-rank tie handling. Empty when a
/// series is constant (undefined) or shorter than 3.
std::optional<double> spearman(std::span<const double> xs,
                               std::span<const double> ys);

struct BootstrapInterval {
  double lo = 0.0;
  double hi = 0.0;
  int resamples = 0;
  int degenerate_skipped = 0;

  bool excludes_zero() const { return hi < 0.0 || lo > 0.0; }
};

/// Percentile bootstrap 95% interval for the Spearman correlation of paired
/// data; resamples pairs with replacement. Deterministic in `seed`.
std::optional<BootstrapInterval> bootstrap_spearman_interval(
    std::span<const double> xs, std::span<const double> ys, int resamples,
    std::uint64_t seed);

}  // namespace confctl::stats

#endif  // CONFCTL_STATS_HPP_
