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

#include "ips/exact/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "ips/core/error.hpp"

namespace ips::exact {

namespace {

std::vector<double> measures(const DistributionVector& mu, std::span<const UpSet> upsets) {
  std::vector<double> m;
  m.reserve(upsets.size());
  for (const UpSet& u : upsets) m.push_back(mu.measure(u));
  return m;
}

double pair_violation(const DistributionVector& mu, const UpSet& u, const UpSet& v, double mu_u, double mu_v) {
  return mu_u * mu_v - mu.measure({u.sites, u.members & v.members});
}

std::vector<DistributionVector> transients_from_every_point(const RateMatrix& q, double t, double epsilon) {
  std::vector<DistributionVector> out;
  out.reserve(q.states());
  for (ConfigIndex c = 0; c < q.states(); ++c)
    out.push_back(transient_distribution(q, DistributionVector::point_mass(q.sites(), c), t, epsilon));
  return out;
}

int small_lattice_sites(const Lattice& lattice, int cap, const char* what) {
  if (lattice.site_count() > static_cast<std::size_t>(cap))
    throw CapacityError(std::string(what) + " limited to " + std::to_string(cap) + " sites");
  return static_cast<int>(lattice.site_count());
}

}  // namespace

double association_violation(const DistributionVector& mu, std::span<const UpSet> upsets) {
  const auto m = measures(mu, upsets);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < upsets.size(); ++i)
    for (std::size_t j = i; j < upsets.size(); ++j)
      worst = std::max(worst, pair_violation(mu, upsets[i], upsets[j], m[i], m[j]));
  return upsets.empty() ? 0.0 : worst;
}

double association_violation_sampled(const DistributionVector& mu, std::span<const UpSet> upsets,
                                     std::size_t pairs, RandomStream& stream) {
  if (upsets.empty()) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pairs; ++k) {
    const UpSet& u = upsets[stream.below(upsets.size())];
    const UpSet& v = upsets[stream.below(upsets.size())];
    worst = std::max(worst, pair_violation(mu, u, v, mu.measure(u), mu.measure(v)));
  }
  return worst;
}

double HarrisReport::worst() const {
  return min_slack.empty() ? 0.0 : *std::min_element(min_slack.begin(), min_slack.end());
}

HarrisReport check_harris_product(std::span<const double> densities, int sites) {
  if (sites < 0 || sites > 4) throw CapacityError("exhaustive Harris check limited to 4 sites");
  const auto upsets = enumerate_upsets(sites);
  HarrisReport r;
  r.sites = sites;
  r.pairs_per_density = upsets.size() * upsets.size();
  for (double rho : densities) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("densities must lie in (0, 1)");
    const auto nu = DistributionVector::product(sites, rho);
    const auto m = measures(nu, upsets);
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < upsets.size(); ++i)
      for (std::size_t j = 0; j < upsets.size(); ++j) {
        const double s = -pair_violation(nu, upsets[i], upsets[j], m[i], m[j]);
        if (s < -kExactSlack) ++r.violations;
        slack = std::min(slack, s);
      }
    r.densities.push_back(rho);
    r.min_slack.push_back(slack);
  }
  return r;
}

LatticeConditionResult lattice_condition(const DistributionVector& mu) {
  LatticeConditionResult r;
  const auto p = mu.probabilities();
  for (ConfigIndex c = 0; c < p.size(); ++c)
    if (p[c] == 0.0) r.zero_atoms.push_back(c);
  r.strictly_positive = r.zero_atoms.empty();
  double worst = -std::numeric_limits<double>::infinity();
  for (ConfigIndex a = 0; a < p.size(); ++a)
    for (ConfigIndex b = a; b < p.size(); ++b) worst = std::max(worst, p[a] * p[b] - p[a & b] * p[a | b]);
  r.max_violation = worst;
  return r;
}

DistributionVector build_gibbs(int sites, std::span<const double> couplings, std::span<const double> fields) {
  if (sites < 0 || sites > kMaxGeneratorSites) throw CapacityError("Gibbs measure limited to 12 sites");
  const auto n = static_cast<std::size_t>(sites);
  if (couplings.size() != n * n || fields.size() != n) throw UsageError("coupling matrix or field size mismatch");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      if (couplings[x * n + y] != couplings[y * n + x]) throw DomainError("couplings must be symmetric");
      if (!(couplings[x * n + y] >= 0.0)) throw DomainError("couplings must be nonnegative (ferromagnetic)");
    }
  std::vector<double> energy(std::size_t{1} << n);
  for (ConfigIndex c = 0; c < energy.size(); ++c) {
    double e = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (!((c >> x) & 1u)) continue;
      e += fields[x];
      for (std::size_t y = x + 1; y < n; ++y)
        if ((c >> y) & 1u) e += couplings[x * n + y];
    }
    energy[c] = e;
  }
  const double top = *std::max_element(energy.begin(), energy.end());
  for (double& e : energy) e = std::exp(e - top);
  return DistributionVector::from_weights(sites, std::move(energy));
}

AttractivenessResult is_attractive(const SpinSystemSpec& spec) {
  const int n = spec.sites();
  const ConfigIndex states = ConfigIndex{1} << n;
  for (ConfigIndex eta = 0; eta < states; ++eta)
    for (int y = 0; y < n; ++y) {
      if ((eta >> y) & 1u) continue;
      const ConfigIndex zeta = eta | (ConfigIndex{1} << y);
      for (int x = 0; x < n; ++x) {
        if (x == y) continue;
        const bool occupied = (eta >> x) & 1u;
        const double lo = spec.rate(x, eta), hi = spec.rate(x, zeta);
        if ((!occupied && lo > hi) || (occupied && lo < hi)) return {false, AttractivenessWitness{x, eta, zeta}};
      }
    }
  return {};
}

double monotonicity_violation(const SpinSystemSpec& spec, double t, double epsilon) {
  const int n = spec.sites();
  if (n > 4) throw CapacityError("semigroup monotonicity check limited to 4 sites");
  const auto upsets = enumerate_upsets(n);
  const auto from = transients_from_every_point(build_spin_generator(spec), t, epsilon);
  double worst = -std::numeric_limits<double>::infinity();
  for (ConfigIndex eta = 0; eta < from.size(); ++eta)
    for (int y = 0; y < n; ++y) {
      if ((eta >> y) & 1u) continue;
      const ConfigIndex zeta = eta | (ConfigIndex{1} << y);
      for (const UpSet& u : upsets) worst = std::max(worst, from[eta].measure(u) - from[zeta].measure(u));
    }
  return worst;
}

double PreservationReport::worst() const {
  return violations.empty() ? 0.0 : *std::max_element(violations.begin(), violations.end());
}

PreservationReport check_preservation(const SpinSystemSpec& spec, const DistributionVector& mu0,
                                      std::span<const double> times, double epsilon) {
  const int n = spec.sites();
  if (n > 4) throw CapacityError("preservation check limited to 4 sites");
  if (mu0.sites() != n) throw UsageError("initial measure does not match the spin system");
  if (const auto a = is_attractive(spec); !a.attractive)
    throw UsageError("preservation check needs an attractive system (rate criterion fails at site " +
                     std::to_string(a.witness->site) + ")");
  const auto upsets = enumerate_upsets(n);
  if (association_violation(mu0, upsets) > kExactSlack)
    throw UsageError("preservation check needs an associated initial measure");

  const RateMatrix q = build_spin_generator(spec);
  PreservationReport r;
  r.tolerance = epsilon + kExactSlack;
  for (double t : times) {
    r.times.push_back(t);
    r.violations.push_back(association_violation(transient_distribution(q, mu0, t, epsilon), upsets));
  }
  return r;
}

PairReport check_duality(const Lattice& lattice, double lambda, double t, double epsilon) {
  small_lattice_sites(lattice, 6, "duality check");
  const auto from = transients_from_every_point(build_contact_generator(lattice, lambda), t, epsilon);
  const auto states = static_cast<ConfigIndex>(from.size());
  PairReport r{-1.0, 0, 0};
  for (ConfigIndex eta = 0; eta < states; ++eta)
    for (ConfigIndex a = 0; a < states; ++a) {
      double forward = 0.0, backward = 0.0;
      for (ConfigIndex z = 0; z < states; ++z) {
        if (!(z & a)) forward += from[eta][z];
        if (!(z & eta)) backward += from[a][z];
      }
      const double d = std::abs(forward - backward);
      if (d > r.value) r = {d, eta, a};
    }
  return r;
}

std::vector<double> survival_table(const Lattice& lattice, double lambda, double t, double epsilon) {
  small_lattice_sites(lattice, kMaxGeneratorSites, "survival table");
  const auto from = transients_from_every_point(build_contact_generator(lattice, lambda), t, epsilon);
  std::vector<double> g;
  g.reserve(from.size());
  for (const auto& mu : from) g.push_back(1.0 - mu[0]);
  return g;
}

PairReport check_submodularity(const Lattice& lattice, double lambda, double t, double epsilon) {
  small_lattice_sites(lattice, 4, "submodularity check");
  const auto g = survival_table(lattice, lambda, t, epsilon);
  const auto states = static_cast<ConfigIndex>(g.size());
  PairReport r{std::numeric_limits<double>::infinity(), 0, 0};
  for (ConfigIndex a = 0; a < states; ++a)
    for (ConfigIndex b = 0; b < states; ++b) {
      const double slack = g[a] + g[b] - g[a | b] - g[a & b];
      if (slack < r.value) r = {slack, a, b};
    }
  return r;
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

SuiteReport run_default_suite(double epsilon) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport report;
  auto add_max = [&](std::string name, double value, double threshold) {
    report.checks.push_back({std::move(name), value, threshold, "max", value <= threshold});
  };
  auto add_min = [&](std::string name, double value, double threshold) {
    report.checks.push_back({std::move(name), value, threshold, "min", value >= threshold});
  };

  const std::vector<double> rho_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double harris = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= 4; ++n) harris = std::min(harris, check_harris_product(rho_grid, n).worst());
  add_min("harris_inequality_min_slack", harris, -kExactSlack);

  const int gibbs_sites = 4;
  const auto upsets4 = enumerate_upsets(gibbs_sites);
  RandomStream draws(2026, 0, StreamPurpose::sampling);
  double fkg_lattice = -1.0, fkg_assoc = -1.0;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> j(16, 0.0), h(4);
    for (int x = 0; x < 4; ++x)
      for (int y = x + 1; y < 4; ++y) j[x * 4 + y] = j[y * 4 + x] = 2.0 * draws.uniform();
    for (double& f : h) f = 2.0 * draws.uniform() - 1.0;
    const auto mu = build_gibbs(gibbs_sites, j, h);
    fkg_lattice = std::max(fkg_lattice, lattice_condition(mu).max_violation);
    fkg_assoc = std::max(fkg_assoc, association_violation(mu, upsets4));
  }
  add_max("fkg_lattice_condition_max_violation", fkg_lattice, kExactSlack);
  add_max("fkg_association_max_violation", fkg_assoc, kExactSlack);

  const std::vector<double> times{0.5, 1.0, 2.0, 5.0};
  const Lattice ring = Lattice::ring(4);
  const auto all_ones = DistributionVector::point_mass(4, 0b1111);
  double preservation = -1.0;
  for (double lambda : {0.5, 1.5, 3.0}) {
    const auto spec = SpinSystemSpec::contact(ring, lambda);
    preservation = std::max(preservation, check_preservation(spec, all_ones, times, epsilon).worst());
    preservation =
        std::max(preservation, check_preservation(spec, DistributionVector::product(4, 0.5), times, epsilon).worst());
  }
  for (double rho : {0.3, 0.7}) {
    const auto spec = SpinSystemSpec::independent_flip(4, rho);
    preservation = std::max(preservation, check_preservation(spec, all_ones, times, epsilon).worst());
    preservation =
        std::max(preservation, check_preservation(spec, DistributionVector::product(4, 0.2), times, epsilon).worst());
  }
  add_max("preservation_of_association_max_violation", preservation, epsilon + kExactSlack);

  double duality = 0.0, submodularity = std::numeric_limits<double>::infinity();
  for (double lambda : {0.5, 1.5, 3.0})
    for (double t : {0.5, 1.0, 2.0}) {
      duality = std::max(duality, check_duality(ring, lambda, t, epsilon).value);
      submodularity = std::min(submodularity, check_submodularity(ring, lambda, t, epsilon).value);
    }
  add_max("self_duality_max_discrepancy", duality, 2.0 * epsilon);
  add_min("submodularity_min_slack", submodularity, -4.0 * epsilon);

  double distance = 0.0, flip_assoc = -1.0;
  for (double rho : rho_grid) {
    const auto spec = SpinSystemSpec::independent_flip(4, rho);
    const auto mu = transient_distribution(build_spin_generator(spec), all_ones, 50.0, epsilon / 100.0);
    distance = std::max(distance, mu.total_variation(DistributionVector::product(4, rho)));
    flip_assoc = std::max(flip_assoc, association_violation(mu, upsets4));
  }
  add_max("spin_flip_distance_to_product_at_t50", distance, 1e-8);
  add_max("spin_flip_limit_association_max_violation", flip_assoc, epsilon + kExactSlack);

  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ips::exact
