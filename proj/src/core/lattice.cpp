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

#include "ips/core/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "ips/core/error.hpp"

namespace ips {

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "free";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "free") return Boundary::free;
  throw UsageError("unknown boundary mode '" + s + "'");
}

Lattice::Lattice(std::vector<std::size_t> sides, Boundary boundary)
    : sides_(std::move(sides)), boundary_(boundary) {
  if (sides_.empty()) throw UsageError("lattice needs at least one dimension");
  for (std::size_t L : sides_) {
    if (L == 0) throw UsageError("lattice sides must be positive");
    if (boundary_ == Boundary::periodic && L < 3)
      throw UsageError("periodic lattice sides must be >= 3");
    strides_.push_back(site_count_);
    if (site_count_ > std::numeric_limits<Site>::max() / L)
      throw CapacityError("lattice too large for 32-bit site indices");
    site_count_ *= L;
  }

  const std::size_t d = sides_.size();
  std::vector<std::vector<Site>> adj(site_count_);
  for (std::size_t s = 0; s < site_count_; ++s) {
    for (std::size_t axis = 0; axis < d; ++axis) {
      const std::size_t x = coordinate(static_cast<Site>(s), axis);
      std::size_t up;
      if (x + 1 < sides_[axis]) {
        up = s + strides_[axis];
      } else if (boundary_ == Boundary::periodic) {
        up = s - x * strides_[axis];
      } else {
        continue;
      }
      bonds_.push_back({static_cast<Site>(s), static_cast<Site>(up), static_cast<std::uint32_t>(axis)});
      adj[s].push_back(static_cast<Site>(up));
      adj[up].push_back(static_cast<Site>(s));
    }
  }
  directed_.reserve(2 * bonds_.size());
  for (const Bond& b : bonds_) {
    directed_.push_back({b.u, b.v});
    directed_.push_back({b.v, b.u});
  }
  nbr_offsets_.reserve(site_count_ + 1);
  nbr_offsets_.push_back(0);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    nbr_sites_.insert(nbr_sites_.end(), list.begin(), list.end());
    nbr_offsets_.push_back(nbr_sites_.size());
  }
}

std::span<const Site> Lattice::neighbors(Site site) const {
  if (site >= site_count_)
    throw UsageError("site index " + std::to_string(site) + " out of range");
  return std::span<const Site>(nbr_sites_).subspan(
      nbr_offsets_[site], nbr_offsets_[site + 1] - nbr_offsets_[site]);
}

std::size_t Lattice::coordinate(Site site, std::size_t axis) const {
  return (site / strides_[axis]) % sides_[axis];
}

std::vector<std::size_t> Lattice::coordinates(Site site) const {
  if (site >= site_count_) throw UsageError("site index out of range");
  std::vector<std::size_t> c(dims());
  for (std::size_t a = 0; a < dims(); ++a) c[a] = coordinate(site, a);
  return c;
}

Site Lattice::site_at(std::span<const std::size_t> coords) const {
  if (coords.size() != dims()) throw UsageError("coordinate arity mismatch");
  std::size_t s = 0;
  for (std::size_t a = 0; a < dims(); ++a) {
    if (coords[a] >= sides_[a]) throw UsageError("coordinate out of range");
    s += coords[a] * strides_[a];
  }
  return static_cast<Site>(s);
}

std::string Lattice::describe() const {
  std::ostringstream os;
  for (std::size_t a = 0; a < dims(); ++a) os << (a ? "x" : "") << sides_[a];
  os << " " << to_string(boundary_);
  return os.str();
}

}  // namespace ips
