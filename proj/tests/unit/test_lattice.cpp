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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ips/core/bits.hpp"
#include "ips/core/lattice.hpp"

namespace {

using ips::Boundary;
using ips::Lattice;
using ips::Site;

std::vector<Site> nbrs(const Lattice& l, Site s) {
  auto n = l.neighbors(s);
  return {n.begin(), n.end()};
}

TEST(Lattice, RingWraps) { EXPECT_EQ(nbrs(Lattice::ring(4), 0), (std::vector<Site>{1, 3})); }

TEST(Lattice, ChainEndHasOneNeighbour) { EXPECT_EQ(nbrs(Lattice::chain(4), 0), (std::vector<Site>{1})); }

TEST(Lattice, FreeSquareCentreHasFour) { EXPECT_EQ(Lattice::square(3, Boundary::free).neighbors(4).size(), 4u); }

TEST(Lattice, OutOfRangeSite) { EXPECT_THROW(Lattice::ring(4).neighbors(4), ips::UsageError); }

TEST(Lattice, PeriodicNeedsSideThree) { EXPECT_THROW(Lattice::ring(2), ips::UsageError); }

TEST(Lattice, DegreeAndBondCounts) {
  for (auto boundary : {Boundary::periodic, Boundary::free}) {
    const Lattice l({5, 4, 3}, boundary);
    EXPECT_EQ(l.site_count(), 60u);
    EXPECT_EQ(l.directed_bonds().size(), 2 * l.bonds().size());
    std::size_t degree_sum = 0;
    for (Site x = 0; x < l.site_count(); ++x) {
      const auto n = l.neighbors(x);
      degree_sum += n.size();
      if (boundary == Boundary::periodic) {
        EXPECT_EQ(n.size(), 6u);
      } else {
        EXPECT_GE(n.size(), 3u);
        EXPECT_LE(n.size(), 6u);
      }
      EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
      for (Site y : n) {
        const auto back = l.neighbors(y);
        EXPECT_TRUE(std::find(back.begin(), back.end(), x) != back.end());
      }
    }
    EXPECT_EQ(degree_sum, 2 * l.bonds().size());
  }
}

TEST(Lattice, BondsAreDistinctAdjacentPairs) {
  const Lattice l = Lattice::square(4, Boundary::periodic);
  std::set<std::pair<Site, Site>> seen;
  for (const auto& b : l.bonds()) {
    EXPECT_TRUE(seen.insert({std::min(b.u, b.v), std::max(b.u, b.v)}).second);
    const auto n = l.neighbors(b.u);
    EXPECT_TRUE(std::find(n.begin(), n.end(), b.v) != n.end());
  }
  EXPECT_EQ(seen.size(), 32u);
}

TEST(Lattice, CoordinatesRoundTrip) {
  const Lattice l({3, 4}, Boundary::free);
  for (Site s = 0; s < l.site_count(); ++s) EXPECT_EQ(l.site_at(l.coordinates(s)), s);
  EXPECT_EQ(l.coordinate(5, 0), 2u);
  EXPECT_EQ(l.coordinate(5, 1), 1u);
}

TEST(Lattice, BoundaryNames) {
  EXPECT_EQ(ips::boundary_from_string(ips::to_string(Boundary::free)), Boundary::free);
  EXPECT_THROW(ips::boundary_from_string("twisted"), ips::UsageError);
}

TEST(SpinConfig, OrderAndSetOps) {
  using ips::SpinConfig;
  const auto a = SpinConfig::from_indices(70, {1, 65});
  const auto b = SpinConfig::from_indices(70, {1, 2, 65});
  EXPECT_TRUE(a.is_subset_of(b));
  EXPECT_TRUE(a.comparable(b));
  EXPECT_FALSE(SpinConfig::from_indices(70, {3}).comparable(a));
  EXPECT_EQ((a | SpinConfig::from_indices(70, {69})).count(), 3u);
  EXPECT_EQ((a & b), a);
  EXPECT_EQ(SpinConfig::full(70).count(), 70u);
  EXPECT_EQ(b.indices(), (std::vector<Site>{1, 2, 65}));
  EXPECT_THROW(a.test(70), ips::UsageError);
  EXPECT_THROW(a.is_subset_of(SpinConfig(3)), ips::UsageError);
}

}  // namespace
