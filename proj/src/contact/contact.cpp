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

#include "ips/contact/contact.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "ips/core/error.hpp"

namespace ips::contact {

namespace {

void check_sizes(const SpinConfig& config, const EventLog& log) {
  if (config.size() != log.site_count()) throw UsageError("configuration does not match the log's lattice");
}

inline void step(SpinConfig& state, const Event& e) {
  if (e.kind == EventKind::recovery) {
    state.reset(e.from);
  } else if (state.test(e.from)) {
    state.set(e.to);
  }
}

void check_rate_and_horizon(double lambda, double horizon) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("infection rate must be finite and nonnegative");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and positive");
}

}  // namespace

Trajectory evolve(const SpinConfig& initial, const EventLog& log, std::span<const double> sample_times) {
  check_sizes(initial, log);
  Trajectory out;
  SpinConfig state = initial;
  const auto events = log.events();

  if (sample_times.empty()) {
    out.times.push_back(0.0);
    out.states.push_back(state);
    for (const Event& e : events) {
      SpinConfig before = state;
      step(state, e);
      if (!(state == before)) {
        out.times.push_back(e.time);
        out.states.push_back(state);
      }
    }
    if (out.times.back() != log.horizon()) {
      out.times.push_back(log.horizon());
      out.states.push_back(state);
    }
    return out;
  }

  require_strictly_increasing(sample_times, "sample times");
  if (sample_times.front() < 0.0 || sample_times.back() > log.horizon())
    throw UsageError("sample times must lie in [0, T]");
  std::size_t next = 0;
  for (double s : sample_times) {
    while (next < events.size() && events[next].time <= s) step(state, events[next++]);
    out.times.push_back(s);
    out.states.push_back(state);
  }
  return out;
}

SpinConfig evolve_final(const SpinConfig& initial, const EventLog& log) {
  check_sizes(initial, log);
  SpinConfig state = initial;
  for (const Event& e : log.events()) step(state, e);
  return state;
}

SpinConfig dual_evolve(const SpinConfig& a, const EventLog& log, double duration) {
  check_sizes(a, log);
  if (!(duration >= 0.0)) throw UsageError("dual duration must be nonnegative");
  if (duration > log.horizon()) throw UsageError("dual duration exceeds the log horizon");
  const double floor = log.horizon() - duration;
  SpinConfig dual = a;
  const auto events = log.events();
  for (auto it = events.rbegin(); it != events.rend() && it->time > floor; ++it) {
    if (it->kind == EventKind::recovery) {
      dual.reset(it->from);
    } else if (dual.test(it->to)) {
      dual.set(it->from);
    }
  }
  return dual;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "time,popcount\n";
  char buf[64];
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", trajectory.times[i]);
    os << buf << ',' << trajectory.states[i].count() << '\n';
  }
}

CoupledContact::CoupledContact(std::size_t sites, std::span<const double> lambdas, double lambda_max)
    : words_(sites, 0) {
  if (lambdas.empty() || lambdas.size() > kMaxCopies) throw CapacityError("coupled copies must number 1..64");
  if (!(lambda_max >= 0.0)) throw DomainError("infection rate must be nonnegative");
  double prev = 0.0;
  for (double l : lambdas) {
    if (!(l >= prev) || l > lambda_max) throw UsageError("coupled rates must be ascending within [0, lambda_max]");
    prev = l;
    thresholds_.push_back(lambda_max > 0.0 ? l / lambda_max : 0.0);
  }
  all_ = lambdas.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lambdas.size()) - 1;
}

void CoupledContact::reset(const SpinConfig& initial) {
  if (initial.size() != words_.size()) throw UsageError("configuration does not match coupled state");
  for (std::size_t x = 0; x < words_.size(); ++x) words_[x] = initial.test(x) ? all_ : 0;
}

std::uint64_t CoupledContact::alive() const {
  std::uint64_t any = 0;
  for (auto w : words_) any |= w;
  return any;
}

SpinConfig CoupledContact::state(std::size_t copy) const {
  if (copy >= copies()) throw UsageError("copy index out of range");
  SpinConfig s(words_.size());
  for (std::size_t x = 0; x < words_.size(); ++x)
    if ((words_[x] >> copy) & 1u) s.set(x);
  return s;
}

std::size_t CoupledContact::infected(std::size_t copy) const {
  if (copy >= copies()) throw UsageError("copy index out of range");
  std::size_t n = 0;
  for (auto w : words_) n += (w >> copy) & 1u;
  return n;
}

void apply_log(CoupledContact& state, const EventLog& log) {
  if (state.words().size() != log.site_count()) throw UsageError("coupled state does not match the log");
  for (const Event& e : log.events()) state.apply(e);
}

void run_marks(CoupledContact& state, const ClockSet& clocks, double horizon, RandomStream& stream,
               const std::function<void(const Event&)>& on_event) {
  if (state.words().size() != clocks.site_count()) throw UsageError("coupled state does not match the clocks");
  const double mean = clocks.total_rate() * horizon;
  if (!(mean > 0.0)) return;
  std::poisson_distribution<std::uint64_t> count_dist(mean);
  const std::uint64_t count = count_dist(stream);
  const std::uint64_t check_every = std::max<std::uint64_t>(64, clocks.site_count());
  std::uint64_t until_check = check_every;
  for (std::uint64_t i = 0; i < count; ++i) {
    const Event e = clocks.draw(stream);
    state.apply(e);
    if (on_event) on_event(e);
    if (--until_check == 0) {
      if (!state.alive()) return;
      until_check = check_every;
    }
  }
}

std::vector<Estimate> survival_curve(const Lattice& lattice, const SpinConfig& initial,
                                     std::span<const double> lambdas, double horizon, const ReplicaPlan& plan,
                                     Execution exec) {
  plan.validate();
  require_strictly_increasing(lambdas, "rate grid");
  for (double l : lambdas) check_rate_and_horizon(l, horizon);
  if (initial.size() != lattice.site_count()) throw UsageError("initial configuration does not match lattice");

  const double lambda_max = lambdas.back();
  const ClockSet clocks(lattice, lambda_max);
  std::vector<Estimate> out;
  for (std::size_t begin = 0; begin < lambdas.size(); begin += CoupledContact::kMaxCopies) {
    const auto chunk = lambdas.subspan(begin, std::min(CoupledContact::kMaxCopies, lambdas.size() - begin));
    const auto alive = map_replicas(
        plan.replicas,
        [&](std::size_t r) {
          RandomStream stream = plan.stream(r, StreamPurpose::contact_events);
          CoupledContact state(lattice.site_count(), chunk, lambda_max);
          state.reset(initial);
          run_marks(state, clocks, horizon, stream);
          return state.alive();
        },
        exec);
    std::vector<double> hits(plan.replicas);
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      for (std::size_t r = 0; r < plan.replicas; ++r) hits[r] = static_cast<double>((alive[r] >> k) & 1u);
      out.push_back(summarize(hits));
    }
  }
  return out;
}

Estimate survival_prob(const Lattice& lattice, const SpinConfig& a, double lambda, double horizon,
                       const ReplicaPlan& plan) {
  check_rate_and_horizon(lambda, horizon);
  plan.validate();
  if (a.size() != lattice.site_count()) throw UsageError("initial set does not match lattice");
  if (a.none()) return {0.0, 0.0, plan.replicas};
  const double grid[] = {lambda};
  return survival_curve(lattice, a, grid, horizon, plan).front();
}

LambdaCEstimate estimate_lambda_c(std::span<const std::size_t> lengths, std::span<const double> lambdas,
                                  const ReplicaPlan& plan, const LambdaCOptions& options) {
  if (lengths.size() < 2) throw UsageError("estimate_lambda_c needs at least two ring lengths");
  for (std::size_t i = 1; i < lengths.size(); ++i)
    if (lengths[i] <= lengths[i - 1]) throw UsageError("ring lengths must be strictly increasing");
  if (!(options.time_factor > 0.0)) throw DomainError("time factor must be positive");
  require_strictly_increasing(lambdas, "rate grid");
  plan.validate();

  LambdaCEstimate out;
  for (std::size_t L : lengths) {
    const Lattice ring = Lattice::ring(L);
    const SpinConfig start =
        options.initial == InitialState::full ? SpinConfig::full(L) : SpinConfig::from_indices(L, {0});
    SurvivalCurve curve;
    curve.length = L;
    curve.horizon = options.time_factor * static_cast<double>(L);
    curve.lambdas.assign(lambdas.begin(), lambdas.end());
    curve.estimates = survival_curve(ring, start, lambdas, curve.horizon, plan.derive(L));
    out.curves.push_back(std::move(curve));
  }
  std::vector<CurveCrossing> pairwise;
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    auto c = find_crossing(lambdas, out.curves[i - 1].estimates, out.curves[i].estimates);
    if (!c)
      throw DiagnosticError("no crossing in grid for ring lengths " + std::to_string(lengths[i - 1]) + " and " +
                            std::to_string(lengths[i]));
    pairwise.push_back(*c);
  }
  out.critical = pool_crossings(std::move(pairwise));
  return out;
}

SpinConfig upper_invariant_sample(const Lattice& lattice, double lambda, double horizon, RandomStream& stream) {
  check_rate_and_horizon(lambda, horizon);
  const double grid[] = {lambda};
  CoupledContact state(lattice.site_count(), grid, lambda);
  state.reset(SpinConfig::full(lattice.site_count()));
  run_marks(state, ClockSet(lattice, lambda), horizon, stream);
  return state.state(0);
}

GrowthStats growth_rate(double lambda, double horizon, std::size_t length, const ReplicaPlan& plan) {
  check_rate_and_horizon(lambda, horizon);
  plan.validate();
  if (length < 3) throw UsageError("growth chain needs at least 3 sites");
  const Lattice chain = Lattice::chain(length);
  const ClockSet clocks(chain, lambda);
  const Site centre = static_cast<Site>(length / 2);
  const Site last = static_cast<Site>(length - 1);

  struct Outcome {
    bool touched = false;
    std::size_t infected = 0;
  };
  const auto outcomes = map_replicas(plan.replicas, [&](std::size_t r) {
    RandomStream stream = plan.stream(r, StreamPurpose::contact_events);
    const double grid[] = {lambda};
    CoupledContact state(length, grid, lambda);
    state.reset(SpinConfig::from_indices(length, {centre}));
    Outcome o;
    run_marks(state, clocks, horizon, stream, [&](const Event& e) {
      if (e.kind == EventKind::arrow && (e.to == 0 || e.to == last) && state.words()[e.to]) o.touched = true;
    });
    o.infected = state.infected(0);
    return o;
  });

  GrowthStats s;
  s.lambda = lambda;
  s.horizon = horizon;
  s.replicas = plan.replicas;
  for (const Outcome& o : outcomes) {
    if (o.touched) {
      ++s.touched;
    } else if (o.infected == 0) {
      ++s.extinct;
    } else {
      s.rates.push_back(static_cast<double>(o.infected) / horizon);
    }
  }
  if (static_cast<double>(s.touched) > 0.1 * static_cast<double>(s.replicas))
    throw DiagnosticError("growth: " + std::to_string(s.touched) + " of " + std::to_string(s.replicas) +
                          " replicas reached the chain ends; use a longer chain");
  s.mean_rate = summarize(s.rates);
  if (!s.rates.empty()) s.p05 = quantile(s.rates, 0.05);
  return s;
}

double LocalObservable::operator()(const SpinConfig& eta) const {
  std::size_t b = 0;
  for (std::size_t i = 0; i < support.size(); ++i)
    if (eta.test(support[i])) b |= std::size_t{1} << i;
  return table.at(b);
}

double time_average(const Lattice& lattice, const SpinConfig& initial, double lambda, double horizon,
                    const LocalObservable& f, RandomStream& stream) {
  check_rate_and_horizon(lambda, horizon);
  const std::size_t n = lattice.site_count();
  if (initial.size() != n) throw UsageError("initial configuration does not match lattice");
  if (f.support.size() > 20) throw CapacityError("local observable support too large");
  if (f.table.size() != (std::size_t{1} << f.support.size())) throw UsageError("observable table must have 2^k entries");
  std::vector<std::int32_t> slot(n, -1);
  for (std::size_t i = 0; i < f.support.size(); ++i) {
    if (f.support[i] >= n) throw UsageError("observable support outside lattice");
    slot[f.support[i]] = static_cast<std::int32_t>(i);
  }

  std::vector<std::uint8_t> eta(n);
  std::size_t local = 0;
  for (std::size_t x = 0; x < n; ++x) {
    eta[x] = initial.test(x) ? 1 : 0;
    if (eta[x] && slot[x] >= 0) local |= std::size_t{1} << slot[x];
  }

  const ClockSet clocks(lattice, lambda);
  TimedEventStream marks(clocks, stream);
  double value = f.table[local], integral = 0.0, since = 0.0;
  for (Event e = marks.next(); e.time <= horizon; e = marks.next()) {
    Site changed;
    if (e.kind == EventKind::recovery) {
      if (!eta[e.from]) continue;
      eta[e.from] = 0;
      changed = e.from;
    } else {
      if (!eta[e.from] || eta[e.to]) continue;
      eta[e.to] = 1;
      changed = e.to;
    }
    if (slot[changed] < 0) continue;
    integral += value * (e.time - since);
    since = e.time;
    local ^= std::size_t{1} << slot[changed];
    value = f.table[local];
  }
  integral += value * (horizon - since);
  return integral / horizon;
}

}  // namespace ips::contact
