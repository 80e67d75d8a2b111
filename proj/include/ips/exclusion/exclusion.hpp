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
#include <vector>

#include "ips/core/bits.hpp"
#include "ips/core/lattice.hpp"
#include "ips/core/replica.hpp"

namespace ips::exclusion {

/// Symmetric nearest-neighbour stirring rates, one per undirected bond.
struct StirringKernel {
  std::vector<double> bond_rates;

  /// p(x, y) = rate for every nearest-neighbour pair (1/2 gives the 1D
  /// walk p(x, x+1) = p(x, x-1) = 1/2).
  static StirringKernel uniform(const Lattice& lattice, double rate = 0.5);
  /// From rates per directed bond (Lattice::directed_bonds order). Throws
  /// DomainError unless p(x, y) = p(y, x) >= 0 for every bond.
  static StirringKernel from_directed(const Lattice& lattice, std::span<const double> directed_rates);

  double total_rate() const;
};

struct Swap {
  double time;
  std::uint32_t bond;
};

/// Stirring marks on (0, horizon]: the contents of a bond's two sites are
/// exchanged at each of its marks.
class StirringLog {
 public:
  StirringLog(const Lattice& lattice, StirringKernel kernel, double horizon, std::vector<Swap> swaps);

  double horizon() const { return horizon_; }
  const StirringKernel& kernel() const { return kernel_; }
  std::span<const Swap> swaps() const { return swaps_; }
  std::vector<double> swaps_on(std::size_t bond) const;

 private:
  StirringKernel kernel_;
  double horizon_;
  std::vector<Swap> swaps_;
};

/// Independent Poisson(rate * T) marks per bond (generated as one superposed
/// stream with exponential gaps).
StirringLog gen_stirring_log(const Lattice& lattice, const StirringKernel& kernel, double horizon,
                             RandomStream& stream);

/// Occupancy of a one-dimensional window plus one tagged particle.
///
/// `winding` counts net passages of the tagged particle across the periodic
/// seam (L-1 -> 0 is +1), so displacement = winding * L + tagged - start.
struct TaggedState {
  SpinConfig occupancy;
  Site start = 0;
  Site tagged = 0;
  std::int64_t winding = 0;

  static TaggedState single(const SpinConfig& occupancy, Site tagged);
  std::int64_t displacement(std::size_t length) const {
    return winding * static_cast<std::int64_t>(length) + static_cast<std::int64_t>(tagged) -
           static_cast<std::int64_t>(start);
  }
};

/// Occupancies only: exchanges contents across each marked bond in time order.
SpinConfig stir_occupancy(const SpinConfig& initial, const Lattice& lattice, const StirringLog& log);

/// Exchanges contents across each marked bond in time order. The tagged
/// particle follows an exchange only into an empty site: when both sites are
/// occupied the occupancy is unchanged and the tagged particle stays, so
/// particles keep their order. Requires a 1D lattice.
TaggedState stir_evolve(const Lattice& lattice, const TaggedState& initial, const StirringLog& log);

/// Ring exclusion state packed for speed; bond b joins sites b and b+1 mod L.
class RingExclusion {
 public:
  RingExclusion(std::vector<std::uint8_t> occupancy, Site tagged);

  void swap(std::uint32_t bond) {
    const std::uint32_t l = bond;
    const std::uint32_t r = bond + 1 == length_ ? 0 : bond + 1;
    const std::uint8_t ol = occ_[l];
    const std::uint8_t orr = occ_[r];
    occ_[l] = orr;
    occ_[r] = ol;
    if (tagged_ == l) {
      if (!orr) {
        tagged_ = r;
        if (r == 0) ++winding_;
      }
    } else if (tagged_ == r) {
      if (!ol) {
        tagged_ = l;
        if (r == 0) --winding_;
      }
    }
  }

  std::int64_t displacement() const {
    return winding_ * static_cast<std::int64_t>(length_) + static_cast<std::int64_t>(tagged_) -
           static_cast<std::int64_t>(start_);
  }
  Site tagged() const { return tagged_; }
  std::int64_t winding() const { return winding_; }
  std::span<const std::uint8_t> occupancy() const { return occ_; }

 private:
  std::vector<std::uint8_t> occ_;
  std::uint32_t length_;
  Site start_;
  Site tagged_;
  std::int64_t winding_ = 0;
};

struct TaggedVariance {
  std::vector<double> times;
  /// Per time: mean = sample variance of the displacement, std_error its
  /// standard error.
  std::vector<Estimate> variance;
  std::int64_t max_abs_displacement = 0;
  std::size_t length = 0;
  double density = 0.0;
};

/// Tagged-particle displacement variance on a ring of `length` sites with
/// nearest-neighbour stirring at rate 1/2 per bond. The tagged particle
/// starts at site 0, the other sites are occupied independently with
/// probability `density`. Throws DiagnosticError when some displacement
/// reaches length/4.
TaggedVariance tagged_variance(double density, std::size_t length, std::span<const double> times,
                               const ReplicaPlan& plan, Execution exec = Execution::parallel);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// 95% confidence half-width of the slope (Student t, n - 2 dof).
  double half_width = 0.0;
};

/// Weighted least squares of log(variance) on log(time). Needs >= 3 points
/// spanning >= 1.5 decades; throws DomainError on a nonpositive time,
/// variance or weight.
ScalingFit fit_scaling_exponent(std::span<const double> times, std::span<const double> variances,
                                std::span<const double> weights);

}  // namespace ips::exclusion
