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

#include "confctl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace confctl::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty series");
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<const double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty series");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

double median(std::span<const double> xs) { return quantile(xs, 0.5); }

double iqr(std::span<const double> xs) {
  return quantile(xs, 0.75) - quantile(xs, 0.25);
}

double coefficient_of_variation(std::span<const double> xs) {
  const double m = mean(xs);
  if (m == 0.0) throw std::invalid_argument("cov: zero mean");
  return stddev(xs) / std::abs(m);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> xs,
                               std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("spearman: length mismatch");
  }
  if (xs.size() < 3) return std::nullopt;

  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;  // constant series
  return sxy / std::sqrt(sxx * syy);
}

std::optional<BootstrapInterval> bootstrap_spearman_interval(
    std::span<const double> xs, std::span<const double> ys, int resamples,
    std::uint64_t seed) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("bootstrap: length mismatch");
  }
  const std::size_t n = xs.size();
  if (n < 3 || resamples < 10) return std::nullopt;

  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0xB007u};
  std::mt19937_64 gen(seq);
  // Unbiased bounded draw by rejection; avoids distribution objects so the
  // stream is identical across standard libraries.
  auto draw_index = [&]() -> std::size_t {
    const std::uint64_t bound = n;
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
      v = gen();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  };

  std::vector<double> bx(n), by(n), rhos;
  rhos.reserve(static_cast<std::size_t>(resamples));
  int skipped = 0;
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = draw_index();
      bx[i] = xs[k];
      by[i] = ys[k];
    }
    if (const auto rho = spearman(bx, by)) {
      rhos.push_back(*rho);
    } else {
      ++skipped;
    }
  }
  if (rhos.size() < 10) return std::nullopt;

  BootstrapInterval ci;
  ci.lo = quantile(rhos, 0.025);
  ci.hi = quantile(rhos, 0.975);
  ci.resamples = static_cast<int>(rhos.size());
  ci.degenerate_skipped = skipped;
  return ci;
}

}  // namespace confctl::stats
