// Copyright 2026 The ips Authors
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

#include "ips/core/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ips/core/error.hpp"

namespace ips {

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw UsageError("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("quantile level must lie in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double pos = q * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

void require_strictly_increasing(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw UsageError(std::string(what) + " is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw UsageError(std::string(what) + " must be strictly increasing");
}

std::optional<CurveCrossing> find_crossing(std::span<const double> grid, std::span<const Estimate> smaller,
                                           std::span<const Estimate> larger, double z) {
  const std::size_t n = grid.size();
  if (smaller.size() != n || larger.size() != n) throw UsageError("curve lengths differ from grid");
  require_strictly_increasing(grid, "crossing grid");

  std::vector<double> diff(n), sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = larger[i].mean - smaller[i].mean;
    sigma[i] = std::hypot(larger[i].std_error, smaller[i].std_error);
  }
  auto significant = [&](std::size_t i, double sign) {
    const double d = sign * diff[i];
    return d > 0.0 && d >= z * sigma[i];
  };

  std::optional<CurveCrossing> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(diff[i] < 0.0)) continue;
    std::size_t k = i + 1;
    while (k < n && diff[k] == 0.0) ++k;
    if (k == n || !(diff[k] > 0.0)) continue;

    double cost = 0.0;
    for (std::size_t m = 0; m <= i; ++m) cost += std::max(diff[m], 0.0);
    for (std::size_t m = k; m < n; ++m) cost += std::max(-diff[m], 0.0);
    if (!(cost < best_cost)) continue;

    bool below = false, above = false;
    for (std::size_t m = 0; m <= i; ++m) below = below || significant(m, -1.0);
    for (std::size_t m = k; m < n; ++m) above = above || significant(m, +1.0);
    if (!below || !above) continue;

    const double span = grid[k] - grid[i];
    const double delta = diff[k] - diff[i];
    CurveCrossing c;
    c.lower_index = i;
    c.upper_index = k;
    c.location = grid[i] + span * (-diff[i]) / delta;
    c.uncertainty = span * std::hypot(diff[k] * sigma[i], diff[i] * sigma[k]) / (delta * delta);
    best = c;
    best_cost = cost;
  }
  return best;
}

CriticalPoint pool_crossings(std::vector<CurveCrossing> pairwise) {
  if (pairwise.empty()) throw UsageError("no crossings to pool");
  CriticalPoint cp;
  double sum = 0.0, lo = pairwise.front().location, hi = lo, worst = 0.0;
  for (const auto& c : pairwise) {
    sum += c.location;
    lo = std::min(lo, c.location);
    hi = std::max(hi, c.location);
    worst = std::max(worst, c.uncertainty);
  }
  cp.estimate = sum / static_cast<double>(pairwise.size());
  cp.uncertainty = std::max(0.5 * (hi - lo), worst);
  cp.pairwise = std::move(pairwise);
  return cp;
}

}  // namespace ips
