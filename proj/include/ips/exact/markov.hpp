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
#include <functional>
#include <span>
#include <vector>

#include "ips/core/lattice.hpp"
#include "ips/core/replica.hpp"
#include "ips/core/upset.hpp"

namespace ips::exact {

/// Largest system whose full configuration space we build (4096 states).
inline constexpr int kMaxGeneratorSites = 12;

struct Transition {
  ConfigIndex target;
  double rate;
};

/// Generator Q of a continuous-time chain on {0,1}^n, stored sparsely by
/// outgoing and incoming transitions. Diagonal = -(row sum).
class RateMatrix {
 public:
  /// rows[i] lists the transitions out of configuration i (no self-loops,
  /// rates >= 0, targets in range, no duplicate targets).
  RateMatrix(int sites, std::vector<std::vector<Transition>> rows);

  int sites() const { return sites_; }
  std::size_t states() const { return outgoing_.size(); }
  std::span<const Transition> outgoing(ConfigIndex from) const { return outgoing_[from]; }
  /// Transitions into `to`, with Transition::target holding the source.
  std::span<const Transition> incoming(ConfigIndex to) const { return incoming_[to]; }
  double exit_rate(ConfigIndex from) const { return exit_[from]; }
  double max_exit_rate() const;
  /// q(from, to) including the diagonal.
  double rate(ConfigIndex from, ConfigIndex to) const;
  /// Dense copy, row-major (tests and small systems only).
  std::vector<double> dense() const;

  bool operator==(const RateMatrix& other) const;

 private:
  int sites_;
  std::vector<std::vector<Transition>> outgoing_;
  std::vector<std::vector<Transition>> incoming_;
  std::vector<double> exit_;
};

/// Probability measure on {0,1}^n.
class DistributionVector {
 public:
  /// Throws DomainError unless entries are nonnegative and sum to 1 within 1e-12.
  DistributionVector(int sites, std::vector<double> probabilities);

  static DistributionVector point_mass(int sites, ConfigIndex c);
  /// Product measure with P(eta(x) = 1) = densities[x].
  static DistributionVector product(std::span<const double> densities);
  static DistributionVector product(int sites, double density);
  /// Normalises nonnegative weights.
  static DistributionVector from_weights(int sites, std::vector<double> weights);

  int sites() const { return sites_; }
  std::size_t states() const { return p_.size(); }
  double operator[](ConfigIndex c) const { return p_[c]; }
  std::span<const double> probabilities() const { return p_; }

  /// Total mass on the configurations of an up-set.
  double measure(const UpSet& u) const;
  double total_variation(const DistributionVector& other) const;
  double max_abs_difference(const DistributionVector& other) const;

 private:
  int sites_;
  std::vector<double> p_;
};

/// Single-site spin system: rate(x, eta) is the rate at which coordinate x
/// flips in configuration eta.
class SpinSystemSpec {
 public:
  SpinSystemSpec(int sites, std::function<double(int, ConfigIndex)> rate);

  /// 1 -> 0 at rate 1 - rho, 0 -> 1 at rate rho, independently per site.
  static SpinSystemSpec independent_flip(int sites, double rho);
  /// Contact process rates: recovery 1, infection lambda * (infected neighbours).
  static SpinSystemSpec contact(const Lattice& lattice, double lambda);

  int sites() const { return sites_; }
  double rate(int x, ConfigIndex eta) const { return rates_[static_cast<std::size_t>(eta) * sites_ + x]; }

 private:
  int sites_;
  std::vector<double> rates_;
};

RateMatrix build_contact_generator(const Lattice& lattice, double lambda);
RateMatrix build_spin_generator(const SpinSystemSpec& spec);

/// mu0 * exp(tQ) by uniformization with total-variation error <= epsilon.
///
/// Long horizons are split into slices with Lambda * dt <= 32, each taking
/// epsilon / slices of the budget; each slice truncates its Poisson series
/// once the remaining weight falls below that share. The result is
/// renormalised. Preconditions: t >= 0, epsilon in (0, 1e-6].
DistributionVector transient_distribution(const RateMatrix& q, const DistributionVector& mu0, double t,
                                          double epsilon = 1e-8, Execution exec = Execution::parallel);

/// One step x -> x P with P = I + Q / Lambda. The serial path scatters along
/// outgoing transitions; the parallel path gathers along incoming ones,
/// summing each entry in a fixed order.
void uniformized_step(const RateMatrix& q, double lambda, std::span<const double> in, std::span<double> out,
                      Execution exec);

}  // namespace ips::exact
