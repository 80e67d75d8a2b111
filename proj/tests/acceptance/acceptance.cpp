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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "ips/cli/experiments.hpp"
#include "ips/contact/contact.hpp"
#include "ips/contact/event_log.hpp"
#include "ips/exact/checks.hpp"
#include "ips/exclusion/exclusion.hpp"
#include "ips/percolation/percolation.hpp"

namespace {

using namespace ips;
namespace ct = ips::contact;
namespace ex = ips::exclusion;

constexpr std::uint64_t kSeed = 2026;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(lo + step * i);
  return g;
}

Outcome percolation_critical_point() {
  const std::vector<std::size_t> sizes{32, 64};
  const auto g = grid(0.40, 0.60, 0.01);
  const auto pc = percolation::estimate_pc(sizes, g, ReplicaPlan{kSeed, 2000});
  const double p = pc.critical.estimate;
  return {p >= 0.47 && p <= 0.53,
          fmt("p_c = %.4f +/- %.4f, required [0.47, 0.53]", p, pc.critical.uncertainty)};
}

Outcome contact_lambda_c() {
  const std::vector<std::size_t> lengths{32, 64, 128};
  const auto g = grid(1.2, 2.2, 0.05);
  const auto lc = ct::estimate_lambda_c(lengths, g, ReplicaPlan{kSeed, 2000});
  const double l = lc.critical.estimate;
  return {l >= 1.4 && l <= 1.9,
          fmt("lambda_c = %.4f +/- %.4f, required [1.4, 1.9]", l, lc.critical.uncertainty)};
}

Outcome tagged_scaling() {
  std::vector<double> times;
  for (double t = 64; t <= 2048; t *= 2) times.push_back(t);
  const auto tv = ex::tagged_variance(0.5, 4096, times, ReplicaPlan{kSeed, 10000});
  std::vector<double> v, w;
  for (const auto& e : tv.variance) {
    v.push_back(e.mean);
    w.push_back(e.mean * e.mean / (e.std_error * e.std_error));
  }
  const auto fit = ex::fit_scaling_exponent(times, v, w);
  return {std::abs(fit.slope - 0.5) <= 0.1,
          fmt("slope = %.4f +/- %.4f, required 0.5 +/- 0.1 (max |X_t| = %lld)", fit.slope, fit.half_width,
              static_cast<long long>(tv.max_abs_displacement))};
}

Outcome exact_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = exact::run_default_suite(1e-8);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string failed;
  for (const auto& c : report.checks)
    if (!c.passed) failed += " " + c.name + fmt("=%.3g", c.value);
  return {report.passed() && elapsed < 60.0,
          fmt("%zu checks, %.2f s (limit 60 s)", report.checks.size(), elapsed) +
              (failed.empty() ? "" : ", failed:" + failed)};
}

SpinConfig random_set(std::size_t n, RandomStream& s, double p) {
  SpinConfig a(n);
  for (std::size_t x = 0; x < n; ++x)
    if (s.bernoulli(p)) a.set(x);
  return a;
}

Lattice random_lattice(RandomStream& s) {
  switch (s.below(3)) {
    case 0: return Lattice::ring(3 + s.below(8));
    case 1: return Lattice::chain(2 + s.below(8));
    default: return Lattice::square(3, s.below(2) ? Boundary::periodic : Boundary::free);
  }
}

// Counts logs (of 200) on which `holds` fails.
std::size_t contact_failures(std::uint64_t salt,
                             const std::function<bool(const Lattice&, const ct::EventLog&, RandomStream&)>& holds) {
  std::size_t bad = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    RandomStream s(kSeed + salt, r, StreamPurpose::test);
    const Lattice l = random_lattice(s);
    const double lambda = 0.5 + 3.0 * s.uniform();
    const double horizon = 0.5 + 3.0 * s.uniform();
    RandomStream events(kSeed + salt, r, StreamPurpose::contact_events);
    bad += !holds(l, ct::gen_event_log(l, lambda, horizon, events), s);
  }
  return bad;
}

std::vector<double> change_times(std::initializer_list<const ct::Trajectory*> ts) {
  std::vector<double> times;
  for (const auto* t : ts) times.insert(times.end(), t->times.begin(), t->times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

bool additive(const Lattice& l, const ct::EventLog& log, RandomStream& s) {
  const auto a = random_set(l.site_count(), s, 0.4), b = random_set(l.site_count(), s, 0.4);
  const auto ta = ct::evolve(a, log), tb = ct::evolve(b, log), tab = ct::evolve(a | b, log);
  const auto times = change_times({&ta, &tb, &tab});
  const auto sa = ct::evolve(a, log, times), sb = ct::evolve(b, log, times), sab = ct::evolve(a | b, log, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (sab.states[i] != (sa.states[i] | sb.states[i])) return false;
  return true;
}

bool attractive(const Lattice& l, const ct::EventLog& log, RandomStream& s) {
  const auto a = random_set(l.site_count(), s, 0.3);
  const auto b = a | random_set(l.site_count(), s, 0.3);
  const auto ta = ct::evolve(a, log), tb = ct::evolve(b, log);
  const auto times = change_times({&ta, &tb});
  const auto sa = ct::evolve(a, log, times), sb = ct::evolve(b, log, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!sa.states[i].is_subset_of(sb.states[i])) return false;
  return true;
}

bool dual(const Lattice& l, const ct::EventLog& log, RandomStream& s) {
  for (int k = 0; k < 5; ++k) {
    const auto eta = random_set(l.site_count(), s, 0.4), a = random_set(l.site_count(), s, 0.4);
    if (ct::evolve_final(eta, log).intersects(a) != eta.intersects(ct::dual_evolve(a, log, log.horizon())))
      return false;
  }
  return true;
}

bool trapped(const Lattice& l, const ct::EventLog& log, RandomStream&) {
  const auto traj = ct::evolve(SpinConfig(l.site_count()), log);
  return std::all_of(traj.states.begin(), traj.states.end(), [](const SpinConfig& st) { return st.none(); });
}

std::vector<Site> cyclic_from(const SpinConfig& occ, Site start) {
  std::vector<Site> out;
  const std::size_t n = occ.size();
  for (std::size_t k = 0; k < n; ++k)
    if (occ.test((start + k) % n)) out.push_back(static_cast<Site>((start + k) % n));
  return out;
}

std::size_t conservation_failures() {
  std::size_t bad = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    RandomStream s(kSeed + 5, r, StreamPurpose::test);
    const Lattice l = s.below(2) ? Lattice::ring(3 + s.below(10)) : Lattice::square(4, Boundary::free);
    const auto eta = random_set(l.site_count(), s, 0.5);
    RandomStream marks(kSeed + 5, r, StreamPurpose::stirring);
    const auto log = ex::gen_stirring_log(l, ex::StirringKernel::uniform(l), 5.0, marks);
    bad += ex::stir_occupancy(eta, l, log).count() != eta.count();
  }
  return bad;
}

std::size_t cyclic_order_failures() {
  std::size_t bad = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    RandomStream s(kSeed + 6, r, StreamPurpose::test);
    const std::size_t n = 4 + s.below(9);
    const Lattice ring = Lattice::ring(n);
    SpinConfig eta = random_set(n, s, 0.5);
    eta.set(0);
    RandomStream marks(kSeed + 6, r, StreamPurpose::stirring);
    const auto log = ex::gen_stirring_log(ring, ex::StirringKernel::uniform(ring), 4.0, marks);
    std::vector<Site> after;
    for (Site p : cyclic_from(eta, 0)) after.push_back(ex::stir_evolve(ring, ex::TaggedState::single(eta, p), log).tagged);
    const auto occ = ex::stir_occupancy(eta, ring, log);
    bad += after != cyclic_from(occ, after.front());
  }
  return bad;
}

Outcome pathwise_identities() {
  const std::size_t f[] = {contact_failures(1, additive), contact_failures(2, attractive), contact_failures(3, dual),
                           contact_failures(4, trapped),  conservation_failures(),         cyclic_order_failures()};
  return {std::all_of(std::begin(f), std::end(f), [](std::size_t x) { return x == 0; }),
          fmt("failing logs of 200: additivity %zu, attractiveness %zu, duality %zu, trap %zu, conservation %zu, "
              "cyclic order %zu",
              f[0], f[1], f[2], f[3], f[4], f[5])};
}

Outcome monte_carlo_bridge() {
  const Lattice ring = Lattice::ring(4);
  const double exact = exact::survival_table(ring, 1.5, 1.0)[1];
  const auto mc = ct::survival_prob(ring, SpinConfig::from_indices(4, {0}), 1.5, 1.0, ReplicaPlan{kSeed, 100000});
  const double z = std::abs(mc.mean - exact) / mc.std_error;
  return {z <= 4.0, fmt("MC %.5f +/- %.5f vs exact %.5f, %.2f standard errors (limit 4)", mc.mean, mc.std_error,
                        exact, z)};
}

Outcome nu_percolation_monotone() {
  const std::vector<double> lambdas{1.0, 3.0, 10.0};
  const auto rows = cli::nu_percolation_experiment(lambdas, 64, 50.0, ReplicaPlan{kSeed, 200});
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].median >= rows[i - 1].median;
  return {monotone, fmt("median largest-cluster fraction %.4f, %.4f, %.4f at lambda 1, 3, 10", rows[0].median,
                        rows[1].median, rows[2].median)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"percolation critical point", percolation_critical_point},
      {"contact critical rate in 1D", contact_lambda_c},
      {"tagged-particle variance exponent", tagged_scaling},
      {"exact suite", exact_suite},
      {"pathwise identities", pathwise_identities},
      {"Monte Carlo vs exact survival", monte_carlo_bridge},
      {"upper invariant cluster fraction monotone in lambda", nu_percolation_monotone},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.passed;
    std::printf("%s [%zu] %s: %s (%.1f s)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                s);
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
