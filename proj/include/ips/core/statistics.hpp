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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ips/core/replica.hpp"

namespace ips {

/// Empirical quantile with linear interpolation between order statistics
/// (q in [0, 1]). Throws UsageError on empty input.
double quantile(std::vector<double> samples, double q);

/// Point where the curve of a larger system overtakes that of a smaller one.
struct CurveCrossing {
  double location = 0.0;
  /// First-order error propagated from the two bracketing points.
  double uncertainty = 0.0;
  std::size_t lower_index = 0;
  std::size_t upper_index = 0;
};

/// Locates the crossing of two estimated curves on a shared strictly
/// increasing grid, looking for `larger` to move from below `smaller` to
/// above it.
///
/// Candidates are consecutive nonzero sign changes of D = larger - smaller
/// (negative to positive). The candidate with the least misclassified mass
/// (positive D before it, negative D after it) wins, and the root is linearly
/// interpolated. The crossing is only accepted when D is below zero by at
/// least `z` combined standard errors somewhere before it and above zero by
/// `z` somewhere after it; otherwise std::nullopt.
std::optional<CurveCrossing> find_crossing(std::span<const double> grid, std::span<const Estimate> smaller,
                                           std::span<const Estimate> larger, double z = 3.0);

/// Crossings of successive system sizes pooled into one critical-point
/// estimate: mean of the pairwise locations, uncertainty = max(half-spread,
/// largest propagated pairwise uncertainty).
struct CriticalPoint {
  double estimate = 0.0;
  double uncertainty = 0.0;
  std::vector<CurveCrossing> pairwise;
};

CriticalPoint pool_crossings(std::vector<CurveCrossing> pairwise);

void require_strictly_increasing(std::span<const double> grid, const char* what);

}  // namespace ips
