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

#include "ips/exclusion/exclusion.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "ips/core/error.hpp"
#include "ips/core/statistics.hpp"

namespace ips::exclusion {

StirringKernel StirringKernel::uniform(const Lattice& lattice, double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("stirring rate must be finite and nonnegative");
  return {std::vector<double>(lattice.bonds().size(), rate)};
}

StirringKernel StirringKernel::from_directed(const Lattice& lattice, std::span<const double> directed_rates) {
  if (directed_rates.size() != lattice.directed_bonds().size())
    throw UsageError("one rate per directed bond expected");
  StirringKernel k;
  for (std::size_t b = 0; b < lattice.bonds().size(); ++b) {
    const double forward = directed_rates[2 * b], backward = directed_rates[2 * b + 1];
    if (!(forward >= 0.0) || !std::isfinite(forward)) throw DomainError("stirring rates must be finite and nonnegative");
    if (forward != backward) throw DomainError("stirring needs a symmetric kernel p(x,y) = p(y,x)");
    k.bond_rates.push_back(forward);
  }
  return k;
}

double StirringKernel::total_rate() const {
  double t = 0.0;
  for (double r : bond_rates) t += r;
  return t;
}

StirringLog::StirringLog(const Lattice& lattice, StirringKernel kernel, double horizon, std::vector<Swap> swaps)
    : kernel_(std::move(kernel)), horizon_(horizon), swaps_(std::move(swaps)) {
  if (kernel_.bond_rates.size() != lattice.bonds().size()) throw UsageError("kernel does not match lattice");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  double prev = 0.0;
  for (const Swap& s : swaps_) {
    if (!(s.time > prev) || s.time > horizon) throw UsageError("swap times must increase strictly within (0, T]");
    if (s.bond >= kernel_.bond_rates.size()) throw UsageError("swap bond out of range");
    if (kernel_.bond_rates[s.bond] == 0.0) throw UsageError("swap on a zero-rate bond");
    prev = s.time;
  }
}

std::vector<double> StirringLog::swaps_on(std::size_t bond) const {
  if (bond >= kernel_.bond_rates.size()) throw UsageError("bond out of range");
  std::vector<double> out;
  for (const Swap& s : swaps_)
    if (s.bond == bond) out.push_back(s.time);
  return out;
}

StirringLog gen_stirring_log(const Lattice& lattice, const StirringKernel& kernel, double horizon,
                             RandomStream& stream) {
  if (kernel.bond_rates.size() != lattice.bonds().size()) throw UsageError("kernel does not match lattice");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  std::vector<double> cumulative;
  double total = 0.0;
  for (double r : kernel.bond_rates) {
    if (!(r >= 0.0)) throw DomainError("stirring rates must be nonnegative");
    total += r;
    cumulative.push_back(total);
  }
  std::vector<Swap> swaps;
  if (total > 0.0) {
    double t = 0.0;
    for (;;) {
      double next;
      do {
        next = t + stream.exponential(total);
      } while (next == t);
      if (next > horizon) break;
      t = next;
      const double r = stream.uniform() * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
      if (it == cumulative.end()) --it;
      while (kernel.bond_rates[static_cast<std::size_t>(it - cumulative.begin())] == 0.0) --it;
      swaps.push_back({t, static_cast<std::uint32_t>(it - cumulative.begin())});
    }
  }
  return StirringLog(lattice, kernel, horizon, std::move(swaps));
}

TaggedState TaggedState::single(const SpinConfig& occupancy, Site tagged) {
  if (!occupancy.test(tagged)) throw UsageError("tagged site must be occupied");
  return {occupancy, tagged, tagged, 0};
}

SpinConfig stir_occupancy(const SpinConfig& initial, const Lattice& lattice, const StirringLog& log) {
  if (initial.size() != lattice.site_count()) throw UsageError("configuration does not match lattice");
  SpinConfig occ = initial;
  const auto bonds = lattice.bonds();
  for (const Swap& s : log.swaps()) {
    const Bond& b = bonds[s.bond];
    const bool u = occ.test(b.u), v = occ.test(b.v);
    occ.set(b.u, v);
    occ.set(b.v, u);
  }
  return occ;
}

TaggedState stir_evolve(const Lattice& lattice, const TaggedState& initial, const StirringLog& log) {
  if (lattice.dims() != 1) throw UsageError("tagged evolution needs a one-dimensional lattice");
  if (initial.occupancy.size() != lattice.site_count()) throw UsageError("configuration does not match lattice");
  if (!initial.occupancy.test(initial.tagged)) throw UsageError("tagged site must be occupied");
  TaggedState s = initial;
  const auto bonds = lattice.bonds();
  for (const Swap& sw : log.swaps()) {
    const Bond& b = bonds[sw.bond];
    const bool u = s.occupancy.test(b.u), v = s.occupancy.test(b.v);
    s.occupancy.set(b.u, v);
    s.occupancy.set(b.v, u);
    const bool seam = b.v < b.u;  // the periodic bond (L-1, 0)
    if (s.tagged == b.u && !v) {
      s.tagged = b.v;
      if (seam) ++s.winding;
    } else if (s.tagged == b.v && !u) {
      s.tagged = b.u;
      if (seam) --s.winding;
    }
  }
  return s;
}

RingExclusion::RingExclusion(std::vector<std::uint8_t> occupancy, Site tagged)
    : occ_(std::move(occupancy)),
      length_(static_cast<std::uint32_t>(occ_.size())),
      start_(tagged),
      tagged_(tagged) {
  if (occ_.size() < 3) throw UsageError("ring needs at least 3 sites");
  if (tagged >= occ_.size() || !occ_[tagged]) throw UsageError("tagged site must be occupied");
}

TaggedVariance tagged_variance(double density, std::size_t length, std::span<const double> times,
                               const ReplicaPlan& plan, Execution exec) {
  if (!(density > 0.0 && density < 1.0)) throw DomainError("density must lie in (0, 1)");
  if (length < 3 || length > (std::size_t{1} << 31)) throw UsageError("ring length out of range");
  require_strictly_increasing(times, "time grid");
  if (times.front() < 0.0) throw DomainError("times must be nonnegative");
  plan.validate();

  const double total_rate = 0.5 * static_cast<double>(length);
  const auto paths = map_replicas(
      plan.replicas,
      [&](std::size_t r) {
        RandomStream init = plan.stream(r, StreamPurpose::initial_state);
        std::vector<std::uint8_t> occ(length, 0);
        occ[0] = 1;
        for (std::size_t x = 1; x < length; ++x) occ[x] = init.bernoulli(density) ? 1 : 0;
        RingExclusion ring(std::move(occ), 0);

        RandomStream marks = plan.stream(r, StreamPurpose::stirring);
        std::vector<std::int64_t> out;
        out.reserve(times.size());
        double now = 0.0;
        for (double t : times) {
          const double mean = total_rate * (t - now);
          if (mean > 0.0) {
            std::poisson_distribution<std::uint64_t> count(mean);
            for (std::uint64_t n = count(marks); n > 0; --n) ring.swap(marks.below(length));
          }
          now = t;
          out.push_back(ring.displacement());
        }
        return out;
      },
      exec);

  TaggedVariance tv;
  tv.times.assign(times.begin(), times.end());
  tv.length = length;
  tv.density = density;
  std::vector<double> x(plan.replicas), sq(plan.replicas);
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t r = 0; r < plan.replicas; ++r) {
      x[r] = static_cast<double>(paths[r][i]);
      tv.max_abs_displacement = std::max<std::int64_t>(tv.max_abs_displacement, std::llabs(paths[r][i]));
    }
    const double mean = summarize(x).mean;
    for (std::size_t r = 0; r < plan.replicas; ++r) sq[r] = (x[r] - mean) * (x[r] - mean);
    Estimate v = summarize(sq);
    if (plan.replicas > 1) v.mean *= static_cast<double>(plan.replicas) / static_cast<double>(plan.replicas - 1);
    tv.variance.push_back(v);
  }
  if (4 * tv.max_abs_displacement >= static_cast<std::int64_t>(length))
    throw DiagnosticError("tagged displacement reached L/4 = " + std::to_string(length / 4) +
                          "; finite-size contamination, use a longer ring");
  return tv;
}

ScalingFit fit_scaling_exponent(std::span<const double> times, std::span<const double> variances,
                                std::span<const double> weights) {
  const std::size_t n = times.size();
  if (variances.size() != n || weights.size() != n) throw UsageError("fit inputs differ in length");
  if (n < 3) throw UsageError("scaling fit needs at least 3 points");
  double tmin = times[0], tmax = times[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (!(times[i] > 0.0)) throw DomainError("scaling fit needs positive times");
    if (!(variances[i] > 0.0)) throw DomainError("scaling fit needs positive variances");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw DomainError("scaling fit needs positive weights");
    tmin = std::min(tmin, times[i]);
    tmax = std::max(tmax, times[i]);
  }
  if (std::log10(tmax / tmin) < 1.5 - 1e-12) throw UsageError("scaling fit needs a grid spanning 1.5 decades");

  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += weights[i];
    sx += weights[i] * std::log(times[i]);
    sy += weights[i] * std::log(variances[i]);
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(times[i]) - xbar;
    sxx += weights[i] * dx * dx;
    sxy += weights[i] * dx * (std::log(variances[i]) - ybar);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(variances[i]) - fit.intercept - fit.slope * std::log(times[i]);
    rss += weights[i] * r * r;
  }
  const double dof = static_cast<double>(n - 2);
  const boost::math::students_t dist(dof);
  fit.half_width = boost::math::quantile(dist, 0.975) * std::sqrt(rss / dof / sxx);
  return fit;
}

}  // namespace ips::exclusion
