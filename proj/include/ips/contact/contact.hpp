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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ips/contact/event_log.hpp"
#include "ips/core/bits.hpp"
#include "ips/core/replica.hpp"
#include "ips/core/statistics.hpp"

namespace ips::contact {

struct Trajectory {
  std::vector<double> times;
  std::vector<SpinConfig> states;
};

/// Runs the log forward from `initial`: a recovery at x clears x, an arrow
/// x->y infects y if x is infected at that instant. States are recorded at
/// each of `sample_times` (sorted, within [0, T]); with no sample times the
/// trajectory holds time 0, every state change, and T.
Trajectory evolve(const SpinConfig& initial, const EventLog& log, std::span<const double> sample_times = {});

/// State at the horizon of the log.
SpinConfig evolve_final(const SpinConfig& initial, const EventLog& log);

/// Dual process: starts from A at time T and reads the log backwards down to
/// T - duration. A recovery at y removes y; an arrow x->y with y in the set
/// adds x.
SpinConfig dual_evolve(const SpinConfig& a, const EventLog& log, double duration);

/// Writes "time,popcount" rows.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

/// Copies of the contact process sharing one set of marks, one copy per
/// infection rate. Site x holds a word whose bit k is the state of copy k;
/// an arrow with thinning mark m is open for copy k iff m < lambdas[k] /
/// lambda_max. With lambdas ascending, the copies are ordered pathwise.
class CoupledContact {
 public:
  static constexpr std::size_t kMaxCopies = 64;

  CoupledContact(std::size_t sites, std::span<const double> lambdas, double lambda_max);

  void reset(const SpinConfig& initial);

  void apply(const Event& e) {
    if (e.kind == EventKind::recovery) {
      words_[e.from] = 0;
    } else {
      words_[e.to] |= words_[e.from] & open_copies(e.mark);
    }
  }

  std::uint64_t open_copies(double mark) const {
    const auto k = static_cast<std::size_t>(
        std::upper_bound(thresholds_.begin(), thresholds_.end(), mark) - thresholds_.begin());
    return k >= 64 ? 0 : all_ & (~std::uint64_t{0} << k);
  }

  /// Bit k set iff copy k has an infected site.
  std::uint64_t alive() const;
  std::size_t copies() const { return thresholds_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }
  SpinConfig state(std::size_t copy) const;
  std::size_t infected(std::size_t copy) const;

 private:
  std::vector<std::uint64_t> words_;
  std::vector<double> thresholds_;
  std::uint64_t all_;
};

/// Feeds every mark of a materialised log to the coupled state.
void apply_log(CoupledContact& state, const EventLog& log);

/// Advances the coupled state over a horizon T without materialising marks:
/// draws the mark count ~ Poisson(total_rate * T), then each mark's clock.
/// `on_event` (optional) sees every mark after it is applied. Stops early once
/// every copy is extinct.
void run_marks(CoupledContact& state, const ClockSet& clocks, double horizon, RandomStream& stream,
               const std::function<void(const Event&)>& on_event = {});

/// P(A_T != empty) from initial set A, one event stream per replica.
Estimate survival_prob(const Lattice& lattice, const SpinConfig& a, double lambda, double horizon,
                       const ReplicaPlan& plan);

/// Survival-to-T curve over an ascending rate grid, all rates driven by the
/// same thinned marks in each replica (at most 64 rates per pass; longer
/// grids replay the same streams).
std::vector<Estimate> survival_curve(const Lattice& lattice, const SpinConfig& initial,
                                     std::span<const double> lambdas, double horizon, const ReplicaPlan& plan,
                                     Execution exec = Execution::parallel);

enum class InitialState { full, single };

struct LambdaCOptions {
  /// Horizon T = time_factor * L for a ring of length L.
  double time_factor = 1.0;
  InitialState initial = InitialState::full;
};

struct SurvivalCurve {
  std::size_t length = 0;
  double horizon = 0.0;
  std::vector<double> lambdas;
  std::vector<Estimate> estimates;
};

struct LambdaCEstimate {
  CriticalPoint critical;
  std::vector<SurvivalCurve> curves;
};

/// Critical infection rate in one dimension from crossings of survival-to-T
/// curves on rings of increasing length. Throws DiagnosticError when a pair
/// of curves does not cross inside the grid.
LambdaCEstimate estimate_lambda_c(std::span<const std::size_t> lengths, std::span<const double> lambdas,
                                  const ReplicaPlan& plan, const LambdaCOptions& options = {});

/// Approximate sample of the upper invariant measure: the state at T of the
/// process started with every site infected.
SpinConfig upper_invariant_sample(const Lattice& lattice, double lambda, double horizon, RandomStream& stream);

struct GrowthStats {
  double lambda = 0.0;
  double horizon = 0.0;
  std::size_t replicas = 0;
  std::size_t extinct = 0;
  /// Replicas whose infection reached either end of the chain (discarded).
  std::size_t touched = 0;
  /// |A_T| / T for the surviving, untouched replicas, in replica order.
  std::vector<double> rates;
  Estimate mean_rate;
  double p05 = 0.0;
};

/// |A_T| / T from a single infected site in the middle of a free chain of
/// `length` sites, conditioned on survival. Throws DiagnosticError when more
/// than 10% of replicas touch the chain ends.
GrowthStats growth_rate(double lambda, double horizon, std::size_t length, const ReplicaPlan& plan);

/// Function of finitely many coordinates: value = table[b], where bit i of b
/// is the state of support[i].
struct LocalObservable {
  std::vector<Site> support;
  std::vector<double> table;

  static LocalObservable constant(double c) { return {{}, {c}}; }
  static LocalObservable site_indicator(Site x) { return {{x}, {0.0, 1.0}}; }

  double operator()(const SpinConfig& eta) const;
};

/// (1/T) * integral_0^T f(eta_t) dt, integrated exactly between marks.
double time_average(const Lattice& lattice, const SpinConfig& initial, double lambda, double horizon,
                    const LocalObservable& f, RandomStream& stream);

}  // namespace ips::contact
