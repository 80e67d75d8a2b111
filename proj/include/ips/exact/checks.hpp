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
#include <string>
#include <vector>

#include "ips/core/lattice.hpp"
#include "ips/core/rng.hpp"
#include "ips/core/upset.hpp"
#include "ips/exact/markov.hpp"

namespace ips::exact {

/// Threshold below which an exactly computed violation counts as zero.
inline constexpr double kExactSlack = 1e-12;

/// max over up-set pairs (U, V) of mu(U) mu(V) - mu(U n V). Association
/// holds iff this is <= kExactSlack; up-set pairs suffice because every
/// increasing function is a positive combination of up-set indicators.
double association_violation(const DistributionVector& mu, std::span<const UpSet> upsets);

/// Same over `pairs` up-set pairs drawn uniformly with replacement.
double association_violation_sampled(const DistributionVector& mu, std::span<const UpSet> upsets,
                                     std::size_t pairs, RandomStream& stream);

struct HarrisReport {
  int sites = 0;
  std::vector<double> densities;
  /// min over up-set pairs of nu(U n V) - nu(U) nu(V), per density.
  std::vector<double> min_slack;
  std::size_t pairs_per_density = 0;
  std::size_t violations = 0;

  double worst() const;
};

/// Exhaustive Harris inequality check for homogeneous product measures.
HarrisReport check_harris_product(std::span<const double> densities, int sites);

struct LatticeConditionResult {
  bool strictly_positive = true;
  std::vector<ConfigIndex> zero_atoms;
  /// max over (eta, zeta) of mu(eta) mu(zeta) - mu(eta ^ zeta) mu(eta v zeta);
  /// only meaningful when strictly_positive.
  double max_violation = 0.0;
};

LatticeConditionResult lattice_condition(const DistributionVector& mu);

/// mu(eta) proportional to exp(sum_{x<y} J(x,y) eta(x) eta(y) + sum_x h(x) eta(x)).
/// `couplings` is a symmetric n x n row-major matrix with nonnegative
/// entries (diagonal ignored). Throws DomainError on a negative or asymmetric
/// coupling.
DistributionVector build_gibbs(int sites, std::span<const double> couplings, std::span<const double> fields);

struct AttractivenessWitness {
  int site;
  ConfigIndex lower;
  ConfigIndex upper;
};

struct AttractivenessResult {
  bool attractive = true;
  std::optional<AttractivenessWitness> witness;
};

/// Rate criterion for single-site systems: for eta <= zeta with
/// eta(x) = zeta(x) = 0, c(x, eta) <= c(x, zeta); with eta(x) = zeta(x) = 1,
/// c(x, eta) >= c(x, zeta). Comparable pairs differing in one site suffice.
AttractivenessResult is_attractive(const SpinSystemSpec& spec);

/// Direct semigroup form of attractiveness at time t: largest
/// E^eta f(eta_t) - E^zeta f(eta_t) over up-set indicators f and covers
/// eta <= zeta. Practical for sites <= 4.
double monotonicity_violation(const SpinSystemSpec& spec, double t, double epsilon = 1e-8);

struct PreservationReport {
  std::vector<double> times;
  std::vector<double> violations;
  double tolerance = 0.0;

  double worst() const;
  bool passed() const { return worst() <= tolerance; }
};

/// Association of mu_t for each t, given an attractive single-site spec and an
/// associated mu0 (sites <= 4). Throws UsageError naming the failed
/// precondition otherwise. tolerance = epsilon + kExactSlack.
PreservationReport check_preservation(const SpinSystemSpec& spec, const DistributionVector& mu0,
                                      std::span<const double> times, double epsilon = 1e-8);

struct PairReport {
  /// Largest discrepancy (duality) or smallest slack (submodularity).
  double value = 0.0;
  ConfigIndex first = 0;
  ConfigIndex second = 0;
};

/// max over (eta, A) of |P^eta(eta_t = 0 on A) - P^A(eta = 0 on A_t)|, each
/// side from its own transient computation (sites <= 6).
PairReport check_duality(const Lattice& lattice, double lambda, double t, double epsilon = 1e-8);

/// g_t(A) = P^A(A_t nonempty) for every A (index = A's bit mask).
std::vector<double> survival_table(const Lattice& lattice, double lambda, double t, double epsilon = 1e-8);

/// min over (A, B) of g(A) + g(B) - g(A u B) - g(A n B) (sites <= 4).
PairReport check_submodularity(const Lattice& lattice, double lambda, double t, double epsilon = 1e-8);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// "max" (value must not exceed threshold) or "min" (must not fall below).
  std::string kind;
  bool passed = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  double elapsed_seconds = 0.0;

  bool passed() const;
};

/// Every exhaustive identity check at its default tolerance: Harris
/// inequality, FKG instances, preservation of association, self-duality,
/// submodularity and independent-flip convergence.
SuiteReport run_default_suite(double epsilon = 1e-8);

}  // namespace ips::exact
