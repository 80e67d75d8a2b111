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

#include "ips/exact/markov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ips/core/error.hpp"

namespace ips::exact {

namespace {

void check_sites(int sites) {
  if (sites < 0 || sites > kMaxGeneratorSites)
    throw CapacityError("state space limited to " + std::to_string(kMaxGeneratorSites) + " sites");
}

}  // namespace

RateMatrix::RateMatrix(int sites, std::vector<std::vector<Transition>> rows)
    : sites_(sites), outgoing_(std::move(rows)) {
  check_sites(sites);
  const std::size_t n = std::size_t{1} << sites;
  if (outgoing_.size() != n) throw UsageError("rate matrix needs 2^n rows");
  incoming_.resize(n);
  exit_.assign(n, 0.0);
  for (ConfigIndex i = 0; i < n; ++i) {
    auto& row = outgoing_[i];
    std::sort(row.begin(), row.end(), [](const Transition& a, const Transition& b) { return a.target < b.target; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      const Transition& t = row[k];
      if (t.target >= n || t.target == i) throw UsageError("bad transition target");
      if (k && row[k - 1].target == t.target) throw UsageError("duplicate transition");
      if (!(t.rate >= 0.0) || !std::isfinite(t.rate)) throw DomainError("rates must be finite and nonnegative");
      exit_[i] += t.rate;
      incoming_[t.target].push_back({i, t.rate});
    }
  }
}

double RateMatrix::max_exit_rate() const {
  double m = 0.0;
  for (double e : exit_) m = std::max(m, e);
  return m;
}

double RateMatrix::rate(ConfigIndex from, ConfigIndex to) const {
  if (from >= states() || to >= states()) throw UsageError("configuration out of range");
  if (from == to) return -exit_[from];
  for (const Transition& t : outgoing_[from])
    if (t.target == to) return t.rate;
  return 0.0;
}

std::vector<double> RateMatrix::dense() const {
  const std::size_t n = states();
  std::vector<double> d(n * n, 0.0);
  for (ConfigIndex i = 0; i < n; ++i) {
    d[i * n + i] = -exit_[i];
    for (const Transition& t : outgoing_[i]) d[i * n + t.target] = t.rate;
  }
  return d;
}

bool RateMatrix::operator==(const RateMatrix& other) const {
  if (sites_ != other.sites_) return false;
  for (std::size_t i = 0; i < states(); ++i) {
    const auto& a = outgoing_[i];
    const auto& b = other.outgoing_[i];
    // Zero-rate entries are the same as absent ones.
    std::vector<Transition> fa, fb;
    for (auto t : a) if (t.rate != 0.0) fa.push_back(t);
    for (auto t : b) if (t.rate != 0.0) fb.push_back(t);
    if (fa.size() != fb.size()) return false;
    for (std::size_t k = 0; k < fa.size(); ++k)
      if (fa[k].target != fb[k].target || fa[k].rate != fb[k].rate) return false;
  }
  return true;
}

DistributionVector::DistributionVector(int sites, std::vector<double> probabilities)
    : sites_(sites), p_(std::move(probabilities)) {
  check_sites(sites);
  if (p_.size() != (std::size_t{1} << sites)) throw UsageError("distribution needs 2^n entries");
  double total = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0)) throw DomainError("probabilities must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("probabilities must sum to 1");
}

DistributionVector DistributionVector::point_mass(int sites, ConfigIndex c) {
  check_sites(sites);
  std::vector<double> p(std::size_t{1} << sites, 0.0);
  if (c >= p.size()) throw UsageError("configuration out of range");
  p[c] = 1.0;
  return {sites, std::move(p)};
}

DistributionVector DistributionVector::product(std::span<const double> densities) {
  const int n = static_cast<int>(densities.size());
  check_sites(n);
  for (double d : densities)
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("densities must lie in [0, 1]");
  std::vector<double> p(std::size_t{1} << n);
  for (ConfigIndex c = 0; c < p.size(); ++c) {
    double w = 1.0;
    for (int x = 0; x < n; ++x) w *= ((c >> x) & 1u) ? densities[x] : 1.0 - densities[x];
    p[c] = w;
  }
  return from_weights(n, std::move(p));
}

DistributionVector DistributionVector::product(int sites, double density) {
  check_sites(sites);
  const std::vector<double> d(static_cast<std::size_t>(sites), density);
  return product(d);
}

DistributionVector DistributionVector::from_weights(int sites, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("weights must not all vanish");
  for (double& w : weights) w /= total;
  return {sites, std::move(weights)};
}

double DistributionVector::measure(const UpSet& u) const {
  if (u.sites != sites_) throw UsageError("up-set belongs to a different system size");
  double m = 0.0;
  std::uint64_t bits = u.members;
  while (bits) {
    m += p_[static_cast<std::size_t>(std::countr_zero(bits))];
    bits &= bits - 1;
  }
  return m;
}

double DistributionVector::total_variation(const DistributionVector& other) const {
  if (other.p_.size() != p_.size()) throw UsageError("distribution size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) s += std::abs(p_[i] - other.p_[i]);
  return 0.5 * s;
}

double DistributionVector::max_abs_difference(const DistributionVector& other) const {
  if (other.p_.size() != p_.size()) throw UsageError("distribution size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) s = std::max(s, std::abs(p_[i] - other.p_[i]));
  return s;
}

SpinSystemSpec::SpinSystemSpec(int sites, std::function<double(int, ConfigIndex)> rate) : sites_(sites) {
  check_sites(sites);
  const std::size_t n = std::size_t{1} << sites;
  rates_.resize(n * static_cast<std::size_t>(sites));
  for (ConfigIndex eta = 0; eta < n; ++eta)
    for (int x = 0; x < sites; ++x) {
      const double r = rate(x, eta);
      if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("flip rates must be finite and nonnegative");
      rates_[static_cast<std::size_t>(eta) * sites + x] = r;
    }
}

SpinSystemSpec SpinSystemSpec::independent_flip(int sites, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
  return SpinSystemSpec(sites, [rho](int x, ConfigIndex eta) { return ((eta >> x) & 1u) ? 1.0 - rho : rho; });
}

SpinSystemSpec SpinSystemSpec::contact(const Lattice& lattice, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("infection rate must be nonnegative");
  const int n = static_cast<int>(lattice.site_count());
  check_sites(n);
  std::vector<std::vector<Site>> nbrs(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    auto s = lattice.neighbors(static_cast<Site>(x));
    nbrs[x].assign(s.begin(), s.end());
  }
  return SpinSystemSpec(n, [lambda, nbrs](int x, ConfigIndex eta) {
    if ((eta >> x) & 1u) return 1.0;
    int infected = 0;
    for (Site y : nbrs[x]) infected += (eta >> y) & 1u;
    return lambda * infected;
  });
}

RateMatrix build_contact_generator(const Lattice& lattice, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("infection rate must be nonnegative");
  const std::size_t n = lattice.site_count();
  if (n > static_cast<std::size_t>(kMaxGeneratorSites))
    throw CapacityError("contact generator limited to " + std::to_string(kMaxGeneratorSites) + " sites");
  std::vector<std::vector<Transition>> rows(std::size_t{1} << n);
  for (ConfigIndex eta = 0; eta < rows.size(); ++eta) {
    for (Site x = 0; x < n; ++x) {
      const ConfigIndex bit = ConfigIndex{1} << x;
      if (eta & bit) {
        rows[eta].push_back({eta ^ bit, 1.0});
        continue;
      }
      int infected = 0;
      for (Site y : lattice.neighbors(x)) infected += (eta >> y) & 1u;
      if (infected && lambda > 0.0) rows[eta].push_back({eta | bit, lambda * infected});
    }
  }
  return RateMatrix(static_cast<int>(n), std::move(rows));
}

RateMatrix build_spin_generator(const SpinSystemSpec& spec) {
  const int n = spec.sites();
  std::vector<std::vector<Transition>> rows(std::size_t{1} << n);
  for (ConfigIndex eta = 0; eta < rows.size(); ++eta)
    for (int x = 0; x < n; ++x) {
      const double r = spec.rate(x, eta);
      if (r > 0.0) rows[eta].push_back({eta ^ (ConfigIndex{1} << x), r});
    }
  return RateMatrix(n, std::move(rows));
}

void uniformized_step(const RateMatrix& q, double lambda, std::span<const double> in, std::span<double> out,
                      Execution exec) {
  const std::size_t n = q.states();
  if (in.size() != n || out.size() != n) throw UsageError("vector size mismatch");
  const double inv = 1.0 / lambda;
  if (exec == Execution::serial) {
    for (ConfigIndex i = 0; i < n; ++i) out[i] = in[i] * (1.0 - q.exit_rate(i) * inv);
    for (ConfigIndex i = 0; i < n; ++i) {
      const double xi = in[i] * inv;
      for (const Transition& t : q.outgoing(i)) out[t.target] += xi * t.rate;
    }
    return;
  }
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n >= 1024)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto to = static_cast<ConfigIndex>(j);
    double acc = in[to] * (1.0 - q.exit_rate(to) * inv);
    for (const Transition& t : q.incoming(to)) acc += in[t.target] * inv * t.rate;
    out[to] = acc;
  }
}

DistributionVector transient_distribution(const RateMatrix& q, const DistributionVector& mu0, double t,
                                          double epsilon, Execution exec) {
  if (mu0.states() != q.states()) throw UsageError("distribution does not match generator");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and nonnegative");
  if (!(epsilon > 0.0 && epsilon <= 1e-6)) throw DomainError("epsilon must lie in (0, 1e-6]");
  const double lambda = q.max_exit_rate();
  if (t == 0.0 || lambda == 0.0) return mu0;

  constexpr double kMaxSliceMean = 32.0;
  const auto slices = static_cast<std::size_t>(std::ceil(lambda * t / kMaxSliceMean));
  const double dt = t / static_cast<double>(slices);
  const double slice_eps = epsilon / static_cast<double>(slices);
  const double mean = lambda * dt;

  const std::size_t n = q.states();
  std::vector<double> current(mu0.probabilities().begin(), mu0.probabilities().end());
  std::vector<double> power(n), next(n), acc(n);
  for (std::size_t s = 0; s < slices; ++s) {
    power = current;
    double weight = std::exp(-mean);
    double covered = weight;
    for (std::size_t i = 0; i < n; ++i) acc[i] = weight * power[i];
    for (std::size_t k = 1; 1.0 - covered > slice_eps; ++k) {
      uniformized_step(q, lambda, power, next, exec);
      power.swap(next);
      weight *= mean / static_cast<double>(k);
      covered += weight;
      for (std::size_t i = 0; i < n; ++i) acc[i] += weight * power[i];
      if (k > 100000) throw std::logic_error("uniformization failed to converge");
    }
    double total = 0.0;
    for (double x : acc) total += x;
    for (std::size_t i = 0; i < n; ++i) current[i] = std::max(acc[i], 0.0) / total;
  }
  return DistributionVector::from_weights(mu0.sites(), std::move(current));
}

}  // namespace ips::exact
