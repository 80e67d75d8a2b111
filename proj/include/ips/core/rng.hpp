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

#include <array>
#include <cstdint>
#include <limits>

namespace ips {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter generate(Counter counter, Key key);
};

/// What a stream is used for. Different purposes under the same
/// (seed, replica) pair produce unrelated streams.
enum class StreamPurpose : std::uint32_t {
  bond_variates = 1,
  contact_events = 2,
  stirring = 3,
  initial_state = 4,
  sampling = 5,
  test = 99,
};

/// Deterministic random stream keyed by (master seed, replica, purpose).
///
/// The Philox key is derived from (seed, purpose); the high half of the
/// counter holds the replica index and the low half a block counter, so
/// distinct replicas never share a counter value. Satisfies
/// UniformRandomBitGenerator with 64-bit output.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t master_seed, std::uint64_t replica, StreamPurpose purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t lo = next32();
    return (std::uint64_t{next32()} << 32) | lo;
  }

  std::uint32_t next32() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_positive() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }
  /// Exponential with the given rate (> 0).
  double exponential(double rate);
  /// Uniform integer in [0, n) from 32 random bits (n <= 2^32).
  std::uint32_t below(std::uint64_t n) {
    return static_cast<std::uint32_t>((std::uint64_t{next32()} * n) >> 32);
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  void refill();

  Philox4x32::Key key_{};
  std::uint64_t replica_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ips
