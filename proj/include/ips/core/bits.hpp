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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "ips/core/error.hpp"
#include "ips/core/lattice.hpp"

namespace ips {

/// Fixed-length packed bit vector. `Tag` keeps spin and bond vectors apart.
template <class Tag>
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  static BitVector full(std::size_t size) {
    BitVector v(size);
    for (auto& w : v.words_) w = ~std::uint64_t{0};
    v.trim();
    return v;
  }

  static BitVector from_indices(std::size_t size, std::span<const Site> indices) {
    BitVector v(size);
    for (Site i : indices) v.set(i);
    return v;
  }
  static BitVector from_indices(std::size_t size, std::initializer_list<Site> indices) {
    return from_indices(size, std::span<const Site>(indices.begin(), indices.size()));
  }

  /// Bit i of `mask` becomes entry i (i < size <= 64).
  static BitVector from_mask(std::size_t size, std::uint64_t mask) {
    if (size > 64) throw UsageError("from_mask supports at most 64 entries");
    BitVector v(size);
    if (size) v.words_[0] = mask;
    v.trim();
    return v;
  }

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const {
    check(i);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value = true) {
    check(i);
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) words_[i >> 6] |= bit; else words_[i >> 6] &= ~bit;
  }
  void reset(std::size_t i) { set(i, false); }
  void clear() { for (auto& w : words_) w = 0; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_) if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  /// Coordinatewise <= (set inclusion).
  bool is_subset_of(const BitVector& other) const {
    same_size(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }
  bool intersects(const BitVector& other) const {
    same_size(other);
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & other.words_[k]) return true;
    return false;
  }
  /// True when one vector is <= the other.
  bool comparable(const BitVector& other) const {
    return is_subset_of(other) || other.is_subset_of(*this);
  }

  BitVector& operator|=(const BitVector& o) { same_size(o); for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k]; return *this; }
  BitVector& operator&=(const BitVector& o) { same_size(o); for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k]; return *this; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::vector<Site> indices() const {
    std::vector<Site> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        out.push_back(static_cast<Site>(k * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        w &= w - 1;
      }
    }
    return out;
  }

  /// Low 64 entries as an integer (entry i -> bit i).
  std::uint64_t to_mask() const {
    if (size_ > 64) throw UsageError("to_mask supports at most 64 entries");
    return words_.empty() ? 0 : words_[0];
  }

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  void check(std::size_t i) const {
    if (i >= size_) throw UsageError("bit index out of range");
  }
  void same_size(const BitVector& o) const {
    if (o.size_ != size_) throw UsageError("bit vector size mismatch");
  }
  void trim() {
    if (size_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct SpinTag {};
struct BondTag {};

/// eta in {0,1}^S; entry x is 1 when site x is infected/occupied.
using SpinConfig = BitVector<SpinTag>;
/// Open/closed label per undirected bond, in Lattice::bonds() order.
using BondConfig = BitVector<BondTag>;

}  // namespace ips
