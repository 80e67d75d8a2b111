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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ips {

using Site = std::uint32_t;

enum class Boundary { periodic, free };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Undirected nearest-neighbour bond; `v` is the +1 step from `u` along `axis`.
struct Bond {
  Site u;
  Site v;
  std::uint32_t axis;
};

struct DirectedBond {
  Site from;
  Site to;
};

/// A finite box window of Z^d.
///
/// Sites are indexed in row-major order with axis 0 fastest:
/// index = x_0 + L_0 * (x_1 + L_1 * (x_2 + ...)).
/// Undirected bonds are listed site by site, and for each site axis by axis,
/// as the bond to its +e_axis neighbour (if that neighbour exists). Directed
/// bond 2k is bonds()[k] oriented u->v, 2k+1 is v->u.
///
/// Periodic windows require every side >= 3 so that each site has exactly 2d
/// distinct neighbours.
class Lattice {
 public:
  Lattice(std::vector<std::size_t> sides, Boundary boundary);

  static Lattice ring(std::size_t length) { return Lattice({length}, Boundary::periodic); }
  static Lattice chain(std::size_t length) { return Lattice({length}, Boundary::free); }
  static Lattice square(std::size_t side, Boundary boundary) { return Lattice({side, side}, boundary); }

  std::size_t dims() const { return sides_.size(); }
  std::span<const std::size_t> sides() const { return sides_; }
  std::size_t side(std::size_t axis) const { return sides_.at(axis); }
  Boundary boundary() const { return boundary_; }
  std::size_t site_count() const { return site_count_; }

  /// Sorted, distinct neighbours of `site`. Throws UsageError when out of range.
  std::span<const Site> neighbors(Site site) const;

  std::span<const Bond> bonds() const { return bonds_; }
  std::span<const DirectedBond> directed_bonds() const { return directed_; }

  std::size_t coordinate(Site site, std::size_t axis) const;
  std::vector<std::size_t> coordinates(Site site) const;
  Site site_at(std::span<const std::size_t> coords) const;

  bool operator==(const Lattice& other) const {
    return sides_ == other.sides_ && boundary_ == other.boundary_;
  }

  std::string describe() const;

 private:
  std::vector<std::size_t> sides_;
  std::vector<std::size_t> strides_;
  Boundary boundary_;
  std::size_t site_count_ = 1;
  std::vector<std::size_t> nbr_offsets_;
  std::vector<Site> nbr_sites_;
  std::vector<Bond> bonds_;
  std::vector<DirectedBond> directed_;
};

}  // namespace ips
