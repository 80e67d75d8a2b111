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

#include "ips/core/upset.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <string>

#include "ips/core/error.hpp"

namespace ips {

namespace {

void check_mask_sites(int n) {
  if (n < 0 || n > kMaxMaskSites)
    throw CapacityError("up-set masks support at most " + std::to_string(kMaxMaskSites) + " sites");
}

// Configurations reachable from c by switching on one more site.
std::uint64_t covers_mask(int n, ConfigIndex c) {
  std::uint64_t m = 0;
  for (int x = 0; x < n; ++x)
    if (!((c >> x) & 1u)) m |= std::uint64_t{1} << (c | (1u << x));
  return m;
}

}  // namespace

bool is_upward_closed(int n, std::uint64_t members) {
  check_mask_sites(n);
  const ConfigIndex states = ConfigIndex{1} << n;
  for (ConfigIndex c = 0; c < states; ++c) {
    if (!((members >> c) & 1u)) continue;
    const std::uint64_t up = covers_mask(n, c);
    if ((members & up) != up) return false;
  }
  return true;
}

std::vector<UpSet> enumerate_upsets(int n) {
  if (n < 0 || n > kMaxUpsetSites)
    throw CapacityError("enumerate_upsets supports n <= " + std::to_string(kMaxUpsetSites));
  const ConfigIndex states = ConfigIndex{1} << n;

  // Larger configurations first, so every cover of a configuration is decided
  // before the configuration itself.
  std::vector<ConfigIndex> order(states);
  for (ConfigIndex c = 0; c < states; ++c) order[c] = c;
  std::stable_sort(order.begin(), order.end(), [](ConfigIndex a, ConfigIndex b) {
    return std::popcount(a) > std::popcount(b);
  });
  std::vector<std::uint64_t> required(states);
  for (ConfigIndex c = 0; c < states; ++c) required[c] = covers_mask(n, c);

  std::vector<UpSet> out;
  std::function<void(std::size_t, std::uint64_t)> extend = [&](std::size_t pos, std::uint64_t members) {
    if (pos == order.size()) {
      out.push_back({n, members});
      return;
    }
    const ConfigIndex c = order[pos];
    extend(pos + 1, members);
    if ((members & required[c]) == required[c]) extend(pos + 1, members | (std::uint64_t{1} << c));
  };
  extend(0, 0);
  return out;
}

bool is_increasing(int n, std::span<const double> f) {
  check_mask_sites(n);
  const ConfigIndex states = ConfigIndex{1} << n;
  if (f.size() != states) throw UsageError("function table must have 2^n entries");
  for (ConfigIndex c = 0; c < states; ++c)
    for (int x = 0; x < n; ++x)
      if (!((c >> x) & 1u) && f[c] > f[c | (1u << x)]) return false;
  return true;
}

LayerDecomposition layer_decompose(int n, std::span<const double> f) {
  if (!is_increasing(n, f)) throw DomainError("layer_decompose: function is not increasing");
  std::vector<double> levels(f.begin(), f.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  LayerDecomposition d;
  d.base = levels.front();
  for (std::size_t k = 1; k < levels.size(); ++k) {
    UpSet u{n, 0};
    for (ConfigIndex c = 0; c < f.size(); ++c)
      if (f[c] >= levels[k]) u.members |= std::uint64_t{1} << c;
    d.layers.push_back({levels[k] - levels[k - 1], u});
  }
  return d;
}

double LayerDecomposition::evaluate(ConfigIndex c) const {
  double v = base;
  for (const auto& layer : layers)
    if (layer.set.contains(c)) v += layer.weight;
  return v;
}

}  // namespace ips
