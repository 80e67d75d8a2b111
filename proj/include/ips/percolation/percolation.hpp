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
#include <limits>
#include <span>
#include <vector>

#include "ips/core/bits.hpp"
#include "ips/core/lattice.hpp"
#include "ips/core/replica.hpp"
#include "ips/core/statistics.hpp"

namespace ips::percolation {

/// One uniform variate per undirected bond, drawn in Lattice::bonds() order.
/// Bond k is open at density p iff variates[k] < p, which couples all p
/// monotonically.
std::vector<double> sample_bond_variates(const Lattice& lattice, RandomStream& stream);

BondConfig open_below(std::span<const double> variates, double p);

/// Bernoulli(p) bond configuration (shares variates with sample_bond_variates).
BondConfig sample_bonds(const Lattice& lattice, double p, RandomStream& stream);

inline constexpr Site kNoCluster = std::numeric_limits<Site>::max();

/// Cluster labels are canonical: the smallest site index in the cluster.
/// In site mode, empty sites carry kNoCluster.
struct ClusterLabeling {
  std::vector<Site> label;
  /// Canonical label of each cluster, ascending.
  std::vector<Site> roots;
  /// sizes[k] is the site count of cluster roots[k].
  std::vector<std::size_t> sizes;
  /// Successful merges; equals the rank of the open-bond graph.
  std::size_t merges = 0;

  std::size_t cluster_count() const { return roots.size(); }
  std::size_t largest() const;
};

ClusterLabeling cluster(const Lattice& lattice, const BondConfig& bonds);

/// Clusters of occupied sites under nearest-neighbour adjacency.
ClusterLabeling site_cluster(const Lattice& lattice, const SpinConfig& occupied);

/// True iff some open cluster touches both faces orthogonal to `axis`.
/// Requires a free boundary.
bool has_crossing(const Lattice& lattice, const BondConfig& bonds, std::size_t axis = 0);

/// Smallest variate value at which a crossing appears when bonds are opened
/// in increasing variate order: has_crossing(open_below(v, p)) <=> threshold < p.
/// Returns -1 when the faces coincide (side 1 along axis).
double crossing_threshold(const Lattice& lattice, std::span<const double> variates, std::size_t axis = 0);

Estimate crossing_probability(const Lattice& lattice, double p, const ReplicaPlan& plan, std::size_t axis = 0);

struct SweepResult {
  std::size_t side = 0;
  std::vector<double> grid;
  std::vector<Estimate> estimates;
  ReplicaPlan plan;
};

/// Crossing probability on every grid point, all points driven by the same
/// per-replica variates (curves are nondecreasing replica by replica).
SweepResult crossing_sweep(const Lattice& lattice, std::span<const double> grid, const ReplicaPlan& plan,
                           std::size_t axis = 0, Execution exec = Execution::parallel);

struct PcEstimate {
  CriticalPoint critical;
  std::vector<SweepResult> curves;
};

/// Critical density from the crossings of crossing-probability curves of
/// successive square window sizes (free boundary). Each size draws from its
/// own seed derived from the plan. Throws UsageError for fewer than two
/// sizes or a grid not bracketing 1/2, DiagnosticError when a pair of curves
/// does not cross inside the grid.
PcEstimate estimate_pc(std::span<const std::size_t> sizes, std::span<const double> grid, const ReplicaPlan& plan,
                       std::size_t axis = 0);

}  // namespace ips::percolation
