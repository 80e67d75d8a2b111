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

#include <cstdint>
#include <span>
#include <vector>

namespace ips {

/// Index of a configuration of an n-site system: site i <-> bit i.
using ConfigIndex = std::uint32_t;

/// Largest n accepted by enumerate_upsets (M(5) = 7581 up-sets).
inline constexpr int kMaxUpsetSites = 5;
/// Largest n for which an up-set fits in one 64-bit membership mask.
inline constexpr int kMaxMaskSites = 6;

/// Increasing event of {0,1}^n, stored as a membership mask over the 2^n
/// configurations (configuration c <-> bit c).
struct UpSet {
  int sites = 0;
  std::uint64_t members = 0;

  bool contains(ConfigIndex c) const { return (members >> c) & 1u; }
  friend bool operator==(const UpSet&, const UpSet&) = default;
};

/// True when `members` is closed under coordinatewise increase.
bool is_upward_closed(int n, std::uint64_t members);

/// Every up-set of {0,1}^n exactly once, including the empty family and the
/// whole cube. Throws CapacityError for n > kMaxUpsetSites.
std::vector<UpSet> enumerate_upsets(int n);

/// f = base + sum_k weight_k * 1{U_k}, weights > 0, U_k nested and decreasing.
struct LayerDecomposition {
  struct Layer {
    double weight;
    UpSet set;
  };
  double base = 0.0;
  std::vector<Layer> layers;

  double evaluate(ConfigIndex c) const;
};

/// Layer-cake decomposition of an increasing f on {0,1}^n (f given as a
/// table of length 2^n, n <= kMaxMaskSites). Throws DomainError when f is
/// not increasing.
LayerDecomposition layer_decompose(int n, std::span<const double> f);

/// True when f(c) <= f(c | bit x) for every c and every x (covers suffice).
bool is_increasing(int n, std::span<const double> f);

}  // namespace ips
