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

#include "ips/percolation/percolation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ips/core/error.hpp"
#include "ips/percolation/union_find.hpp"

namespace ips::percolation {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1]");
}

void check_crossing_axis(const Lattice& lattice, std::size_t axis) {
  if (axis >= lattice.dims()) throw UsageError("crossing axis out of range");
  if (lattice.boundary() != Boundary::free) throw UsageError("crossing is undefined along a periodic axis");
}

ClusterLabeling labels_from(UnionFind& uf, std::size_t n, const SpinConfig* occupied) {
  ClusterLabeling out;
  out.label.assign(n, kNoCluster);
  out.merges = uf.unions();
  // Canonical label = smallest member; the first member met in index order.
  std::vector<Site> root_label(n, kNoCluster);
  for (Site s = 0; s < n; ++s) {
    if (occupied && !occupied->test(s)) continue;
    const Site r = uf.find(s);
    if (root_label[r] == kNoCluster) {
      root_label[r] = s;
      out.roots.push_back(s);
      out.sizes.push_back(0);
    }
    out.label[s] = root_label[r];
  }
  std::vector<std::size_t> slot(n, 0);
  for (std::size_t k = 0; k < out.roots.size(); ++k) slot[out.roots[k]] = k;
  for (Site s = 0; s < n; ++s)
    if (out.label[s] != kNoCluster) ++out.sizes[slot[out.label[s]]];
  return out;
}

}  // namespace

std::size_t ClusterLabeling::largest() const {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

std::vector<double> sample_bond_variates(const Lattice& lattice, RandomStream& stream) {
  std::vector<double> v(lattice.bonds().size());
  for (auto& x : v) x = stream.uniform();
  return v;
}

BondConfig open_below(std::span<const double> variates, double p) {
  BondConfig open(variates.size());
  for (std::size_t k = 0; k < variates.size(); ++k)
    if (variates[k] < p) open.set(k);
  return open;
}

BondConfig sample_bonds(const Lattice& lattice, double p, RandomStream& stream) {
  check_probability(p);
  return open_below(sample_bond_variates(lattice, stream), p);
}

ClusterLabeling cluster(const Lattice& lattice, const BondConfig& bonds) {
  if (bonds.size() != lattice.bonds().size()) throw UsageError("bond configuration does not match lattice");
  UnionFind uf(lattice.site_count());
  const auto list = lattice.bonds();
  for (std::size_t k = 0; k < list.size(); ++k)
    if (bonds.test(k)) uf.unite(list[k].u, list[k].v);
  return labels_from(uf, lattice.site_count(), nullptr);
}

ClusterLabeling site_cluster(const Lattice& lattice, const SpinConfig& occupied) {
  if (occupied.size() != lattice.site_count()) throw UsageError("configuration does not match lattice");
  UnionFind uf(lattice.site_count());
  for (const Bond& b : lattice.bonds())
    if (occupied.test(b.u) && occupied.test(b.v)) uf.unite(b.u, b.v);
  return labels_from(uf, lattice.site_count(), &occupied);
}

namespace {

// Union-find over the sites plus two virtual face nodes.
UnionFind faces_joined(const Lattice& lattice, std::size_t axis, Site& low, Site& high) {
  const std::size_t n = lattice.site_count();
  UnionFind uf(n + 2);
  low = static_cast<Site>(n);
  high = static_cast<Site>(n + 1);
  const std::size_t last = lattice.side(axis) - 1;
  for (Site s = 0; s < n; ++s) {
    const std::size_t x = lattice.coordinate(s, axis);
    if (x == 0) uf.unite(s, low);
    if (x == last) uf.unite(s, high);
  }
  return uf;
}

}  // namespace

bool has_crossing(const Lattice& lattice, const BondConfig& bonds, std::size_t axis) {
  check_crossing_axis(lattice, axis);
  if (bonds.size() != lattice.bonds().size()) throw UsageError("bond configuration does not match lattice");
  Site low, high;
  UnionFind uf = faces_joined(lattice, axis, low, high);
  const auto list = lattice.bonds();
  for (std::size_t k = 0; k < list.size(); ++k)
    if (bonds.test(k)) uf.unite(list[k].u, list[k].v);
  return uf.connected(low, high);
}

double crossing_threshold(const Lattice& lattice, std::span<const double> variates, std::size_t axis) {
  check_crossing_axis(lattice, axis);
  if (variates.size() != lattice.bonds().size()) throw UsageError("variates do not match lattice");
  Site low, high;
  UnionFind uf = faces_joined(lattice, axis, low, high);
  if (uf.connected(low, high)) return -1.0;

  std::vector<std::uint32_t> order(variates.size());
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return variates[a] < variates[b] || (variates[a] == variates[b] && a < b);
  });
  const auto list = lattice.bonds();
  for (std::uint32_t k : order) {
    uf.unite(list[k].u, list[k].v);
    if (uf.connected(low, high)) return variates[k];
  }
  // All bonds open always connects opposite faces of a box.
  throw std::logic_error("crossing_threshold: fully open window does not cross");
}

Estimate crossing_probability(const Lattice& lattice, double p, const ReplicaPlan& plan, std::size_t axis) {
  check_probability(p);
  check_crossing_axis(lattice, axis);
  plan.validate();
  const auto hits = map_replicas(plan.replicas, [&](std::size_t r) {
    RandomStream stream = plan.stream(r, StreamPurpose::bond_variates);
    return has_crossing(lattice, sample_bonds(lattice, p, stream), axis) ? 1.0 : 0.0;
  });
  return summarize(hits);
}

SweepResult crossing_sweep(const Lattice& lattice, std::span<const double> grid, const ReplicaPlan& plan,
                           std::size_t axis, Execution exec) {
  check_crossing_axis(lattice, axis);
  plan.validate();
  require_strictly_increasing(grid, "probability grid");
  for (double p : grid) check_probability(p);

  const auto thresholds = map_replicas(
      plan.replicas,
      [&](std::size_t r) {
        RandomStream stream = plan.stream(r, StreamPurpose::bond_variates);
        return crossing_threshold(lattice, sample_bond_variates(lattice, stream), axis);
      },
      exec);

  SweepResult out;
  out.side = lattice.side(axis);
  out.grid.assign(grid.begin(), grid.end());
  out.plan = plan;
  std::vector<double> hits(plan.replicas);
  for (double p : grid) {
    for (std::size_t r = 0; r < plan.replicas; ++r) hits[r] = thresholds[r] < p ? 1.0 : 0.0;
    out.estimates.push_back(summarize(hits));
  }
  return out;
}

PcEstimate estimate_pc(std::span<const std::size_t> sizes, std::span<const double> grid, const ReplicaPlan& plan,
                       std::size_t axis) {
  if (sizes.size() < 2) throw UsageError("estimate_pc needs at least two window sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw UsageError("window sizes must be strictly increasing");
  require_strictly_increasing(grid, "probability grid");
  if (!(grid.front() < 0.5 && grid.back() > 0.5)) throw UsageError("probability grid must bracket 1/2");
  plan.validate();

  PcEstimate out;
  for (std::size_t L : sizes) {
    const Lattice window = Lattice::square(L, Boundary::free);
    out.curves.push_back(crossing_sweep(window, grid, plan.derive(L), axis));
  }
  std::vector<CurveCrossing> pairwise;
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    auto c = find_crossing(grid, out.curves[i - 1].estimates, out.curves[i].estimates);
    if (!c)
      throw DiagnosticError("no crossing in grid for window sizes " + std::to_string(sizes[i - 1]) + " and " +
                            std::to_string(sizes[i]));
    pairwise.push_back(*c);
  }
  out.critical = pool_crossings(std::move(pairwise));
  return out;
}

}  // namespace ips::percolation
