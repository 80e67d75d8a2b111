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

// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "ips/contact/contact.hpp"
#include "ips/contact/event_log.hpp"
#include "ips/exact/markov.hpp"
#include "ips/exclusion/exclusion.hpp"
#include "ips/percolation/percolation.hpp"

namespace {

using namespace ips;
namespace ct = ips::contact;
namespace ex = ips::exclusion;

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_UniformizedStep(benchmark::State& state) {
  const auto q = exact::build_contact_generator(Lattice::ring(12), 1.5);
  const double lambda = q.max_exit_rate();
  std::vector<double> in(q.states(), 1.0 / static_cast<double>(q.states())), out(q.states());
  for (auto _ : state) {
    exact::uniformized_step(q, lambda, in, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  label(state);
}
BENCHMARK(BM_UniformizedStep)->Arg(0)->Arg(1);

void BM_CrossingSweep(benchmark::State& state) {
  const Lattice l = Lattice::square(64, Boundary::free);
  const std::vector<double> grid{0.45, 0.5, 0.55};
  for (auto _ : state)
    benchmark::DoNotOptimize(percolation::crossing_sweep(l, grid, ReplicaPlan{1, 256}, 0, exec_of(state)));
  label(state);
}
BENCHMARK(BM_CrossingSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SurvivalCurve(benchmark::State& state) {
  const Lattice ring = Lattice::ring(64);
  const SpinConfig full = SpinConfig::full(64);
  const std::vector<double> lambdas{1.4, 1.6, 1.8};
  for (auto _ : state)
    benchmark::DoNotOptimize(ct::survival_curve(ring, full, lambdas, 64.0, ReplicaPlan{1, 256}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_SurvivalCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TaggedVariance(benchmark::State& state) {
  const std::vector<double> times{16, 64, 256};
  for (auto _ : state)
    benchmark::DoNotOptimize(ex::tagged_variance(0.5, 1024, times, ReplicaPlan{1, 256}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_TaggedVariance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Bit-sliced coupled copies against one thinned log per rate.
void BM_CoupledVsThinned(benchmark::State& state) {
  const Lattice ring = Lattice::ring(256);
  const std::vector<double> lambdas{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
  RandomStream s(1, 0, StreamPurpose::contact_events);
  const auto log = ct::gen_event_log(ring, lambdas.back(), 20.0, s);
  const SpinConfig full = SpinConfig::full(256);
  for (auto _ : state) {
    if (state.range(0)) {
      ct::CoupledContact c(256, lambdas, log.rate());
      c.reset(full);
      ct::apply_log(c, log);
      benchmark::DoNotOptimize(c.alive());
    } else {
      for (double l : lambdas) benchmark::DoNotOptimize(ct::evolve_final(full, ct::thin(ring, log, l)));
    }
  }
  state.SetLabel(state.range(0) ? "coupled" : "thinned");
}
BENCHMARK(BM_CoupledVsThinned)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RingExclusionVsStirEvolve(benchmark::State& state) {
  const std::size_t n = 1024;
  const Lattice ring = Lattice::ring(n);
  RandomStream s(2, 0, StreamPurpose::stirring);
  const auto log = ex::gen_stirring_log(ring, ex::StirringKernel::uniform(ring), 64.0, s);
  SpinConfig eta(n);
  std::vector<std::uint8_t> bytes(n);
  for (Site x = 0; x < n; x += 2) eta.set(x), bytes[x] = 1;
  for (auto _ : state) {
    if (state.range(0)) {
      ex::RingExclusion fast(bytes, 0);
      for (const auto& sw : log.swaps()) fast.swap(ring.bonds()[sw.bond].u);
      benchmark::DoNotOptimize(fast.displacement());
    } else {
      benchmark::DoNotOptimize(ex::stir_evolve(ring, ex::TaggedState::single(eta, 0), log));
    }
  }
  state.SetLabel(state.range(0) ? "packed ring" : "reference");
}
BENCHMARK(BM_RingExclusionVsStirEvolve)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
