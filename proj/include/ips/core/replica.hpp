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
#include <exception>
#include <span>
#include <type_traits>
#include <vector>

#include "ips/core/error.hpp"
#include "ips/core/rng.hpp"

namespace ips {

/// Seed and replica count for a Monte Carlo estimate. Replica i draws from
/// RandomStream(master_seed, i, purpose) only.
struct ReplicaPlan {
  std::uint64_t master_seed = 1;
  std::size_t replicas = 1;

  void validate() const {
    if (replicas == 0) throw UsageError("replica count must be positive");
  }
  RandomStream stream(std::size_t replica, StreamPurpose purpose) const {
    return RandomStream(master_seed, replica, purpose);
  }
  /// Plan with the same replica count and a seed derived from `salt`, for
  /// independent sub-experiments (one per system size, say).
  ReplicaPlan derive(std::uint64_t salt) const {
    return {splitmix64(master_seed + 0x9E3779B97F4A7C15ull * (salt + 1)), replicas};
  }
};

/// Mean and standard error (sample stdev / sqrt(n)).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
};

/// Summary in index order; bit-identical for identical input.
Estimate summarize(std::span<const double> samples);

enum class Execution { serial, parallel };

/// Worker threads used by parallel replica loops and kernels (0 = runtime default).
void set_thread_count(int threads);
int thread_count();

namespace detail {
void parallel_for(std::size_t n, void (*body)(std::size_t, void*), void* ctx);
}

/// results[i] = fn(i) for every replica. The parallel path schedules
/// replicas dynamically across threads; each result lands in its own slot, so
/// the returned vector does not depend on the schedule.
template <class Fn>
auto map_replicas(std::size_t count, Fn&& fn, Execution exec = Execution::parallel) {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> results(count);
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  struct Ctx {
    std::remove_reference_t<Fn>* fn;
    std::vector<R>* out;
  } ctx{&fn, &results};
  detail::parallel_for(
      count,
      [](std::size_t i, void* p) {
        auto* c = static_cast<Ctx*>(p);
        (*c->out)[i] = (*c->fn)(i);
      },
      &ctx);
  return results;
}

}  // namespace ips
