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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "ips/core/rng.hpp"
#include "ips/exact/markov.hpp"

namespace {

using ips::ConfigIndex;
using ips::Lattice;
using ips::RandomStream;
using ips::StreamPurpose;
using namespace ips::exact;

double row_sum(const RateMatrix& q, ConfigIndex i) {
  double s = 0.0;
  for (ConfigIndex j = 0; j < q.states(); ++j) s += q.rate(i, j);
  return s;
}

// Random single-site spec: every rate drawn from {0, 0.5, ..., 2}.
SpinSystemSpec random_spec(int n, RandomStream& s) {
  std::vector<double> table(static_cast<std::size_t>(n) << n);
  for (double& r : table) r = 0.5 * s.below(5);
  return SpinSystemSpec(n, [table, n](int x, ConfigIndex eta) { return table[eta * n + x]; });
}

TEST(ContactGenerator, SingleSite) {
  const Lattice one({1}, ips::Boundary::free);
  EXPECT_EQ(build_contact_generator(one, 2.0).dense(), (std::vector<double>{0, 0, 1, -1}));
}

TEST(ContactGenerator, TwoSites) {
  const auto q = build_contact_generator(Lattice::chain(2), 1.7);
  EXPECT_EQ(q.rate(0b01, 0b11), 1.7);
  EXPECT_EQ(q.rate(0b01, 0b00), 1.0);
  EXPECT_EQ(q.rate(0b01, 0b10), 0.0);
  EXPECT_EQ(q.rate(0b00, 0b00), 0.0);
  EXPECT_EQ(q.rate(0b11, 0b11), -2.0);
}

TEST(ContactGenerator, RowSumsAndMoveSet) {
  for (const Lattice& l : {Lattice::ring(5), Lattice::square(3, ips::Boundary::free), Lattice::chain(7)}) {
    const auto q = build_contact_generator(l, 1.3);
    for (ConfigIndex i = 0; i < q.states(); ++i) {
      EXPECT_NEAR(row_sum(q, i), 0.0, 1e-12);
      for (const auto& t : q.outgoing(i)) {
        EXPECT_GE(t.rate, 0.0);
        EXPECT_EQ(std::popcount(i ^ t.target), 1);
      }
    }
  }
  EXPECT_THROW(build_contact_generator(Lattice::ring(13), 1.0), ips::CapacityError);
}

TEST(SpinGenerator, ContactSpecMatches) {
  const Lattice ring = Lattice::ring(5);
  EXPECT_EQ(build_spin_generator(SpinSystemSpec::contact(ring, 2.5)), build_contact_generator(ring, 2.5));
}

TEST(SpinGenerator, ZeroRatesGiveZeroMatrix) {
  const auto q = build_spin_generator(SpinSystemSpec(3, [](int, ConfigIndex) { return 0.0; }));
  for (double x : q.dense()) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(q.max_exit_rate(), 0.0);
  const auto mu = DistributionVector::point_mass(3, 5);
  EXPECT_EQ(transient_distribution(q, mu, 10.0).max_abs_difference(mu), 0.0);
}

TEST(SpinGenerator, NegativeRateRejected) {
  EXPECT_THROW(SpinSystemSpec(2, [](int, ConfigIndex) { return -1.0; }), ips::DomainError);
}

TEST(SpinGenerator, TwoStateBalance) {
  const auto q = build_spin_generator(SpinSystemSpec::independent_flip(1, 0.3));
  const auto d = q.dense();
  // (1 - rho, rho) Q = 0
  EXPECT_NEAR(0.7 * d[0] + 0.3 * d[2], 0.0, 1e-15);
  EXPECT_NEAR(0.7 * d[1] + 0.3 * d[3], 0.0, 1e-15);
}

TEST(RateMatrix, IncomingMirrorsOutgoing) {
  const auto q = build_contact_generator(Lattice::ring(4), 0.8);
  for (ConfigIndex j = 0; j < q.states(); ++j)
    for (const auto& t : q.incoming(j)) EXPECT_EQ(q.rate(t.target, j), t.rate);
  EXPECT_THROW(RateMatrix(1, {{{0, 1.0}}, {}}), ips::UsageError);
  EXPECT_THROW(RateMatrix(1, {{{1, -1.0}}, {}}), ips::DomainError);
}

TEST(Distribution, Validation) {
  EXPECT_THROW(DistributionVector(1, {0.5, 0.6}), ips::DomainError);
  EXPECT_THROW(DistributionVector(1, {-0.1, 1.1}), ips::DomainError);
  EXPECT_THROW(DistributionVector(2, {1.0, 0.0}), ips::UsageError);
  const auto p = DistributionVector::product(2, 0.25);
  EXPECT_NEAR(p[0b11], 0.0625, 1e-16);
  EXPECT_NEAR(p[0b01], 0.1875, 1e-16);
}

TEST(Transient, TimeZeroIsIdentity) {
  const auto q = build_contact_generator(Lattice::ring(4), 1.0);
  const auto mu = DistributionVector::product(4, 0.35);
  EXPECT_EQ(transient_distribution(q, mu, 0.0).max_abs_difference(mu), 0.0);
}

TEST(Transient, PureDeath) {
  const Lattice one({1}, ips::Boundary::free);
  const auto mu = transient_distribution(build_contact_generator(one, 0.0), DistributionVector::point_mass(1, 1), 1.0);
  EXPECT_NEAR(mu[1], std::exp(-1.0), 1e-8);
}

TEST(Transient, IndependentFlipAnalytic) {
  const double rho = 0.3;
  const auto q = build_spin_generator(SpinSystemSpec::independent_flip(2, rho));
  const auto from_ones = DistributionVector::point_mass(2, 0b11);
  for (double t : {0.1, 0.7, 3.0}) {
    const double p = rho + (1.0 - rho) * std::exp(-t);
    EXPECT_LE(transient_distribution(q, from_ones, t).total_variation(DistributionVector::product(2, p)), 1e-8);
  }
  EXPECT_LE(transient_distribution(q, from_ones, 50.0).max_abs_difference(DistributionVector::product(2, rho)), 1e-8);
}

TEST(Transient, SemigroupProperty) {
  for (std::size_t r = 0; r < 20; ++r) {
    RandomStream s(1, r, StreamPurpose::test);
    const int n = 1 + static_cast<int>(s.below(3));
    const auto q = build_spin_generator(random_spec(n, s));
    std::vector<double> w(std::size_t{1} << n);
    for (double& x : w) x = s.uniform();
    const auto mu = DistributionVector::from_weights(n, w);
    const double a = 3.0 * s.uniform(), b = 3.0 * s.uniform();
    const auto direct = transient_distribution(q, mu, a + b);
    const auto split = transient_distribution(q, transient_distribution(q, mu, a), b);
    EXPECT_LE(direct.total_variation(split), 2e-8);
  }
}

TEST(Transient, LongHorizonAndPreconditions) {
  const auto q = build_contact_generator(Lattice::ring(6), 3.0);
  const auto mu = transient_distribution(q, DistributionVector::point_mass(6, 63), 40.0);
  double total = 0.0;
  for (double p : mu.probabilities()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_THROW(transient_distribution(q, mu, 1.0, 1e-3), ips::DomainError);
  EXPECT_THROW(transient_distribution(q, mu, -1.0), ips::DomainError);
}

TEST(Uniformization, GatherMatchesScatter) {
  const auto q = build_contact_generator(Lattice::square(3, ips::Boundary::periodic), 1.1);
  RandomStream s(2, 0, StreamPurpose::test);
  std::vector<double> in(q.states());
  double total = 0.0;
  for (double& x : in) total += (x = s.uniform());
  for (double& x : in) x /= total;
  std::vector<double> a(in.size()), b(in.size());
  const double lambda = q.max_exit_rate();
  uniformized_step(q, lambda, in, a, ips::Execution::serial);
  uniformized_step(q, lambda, in, b, ips::Execution::parallel);
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
  const auto mu0 = DistributionVector::point_mass(9, 0b111000111);
  EXPECT_LE(transient_distribution(q, mu0, 2.0, 1e-10, ips::Execution::serial)
                .total_variation(transient_distribution(q, mu0, 2.0, 1e-10, ips::Execution::parallel)),
            1e-13);
}

}  // namespace
