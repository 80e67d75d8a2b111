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

#include "ips/core/lattice.hpp"
#include "ips/core/rng.hpp"

namespace ips::contact {

enum class EventKind : std::uint8_t { recovery, arrow };

/// One mark of the graphical representation.
///
/// Recoveries carry the site in `clock`, `from` and `to`. Arrows carry the
/// directed bond index in `clock` and its endpoints. `mark` is a uniform
/// variate used to thin arrows down to a lower infection rate.
struct Event {
  double time = 0.0;
  double mark = 0.0;
  std::uint32_t clock = 0;
  Site from = 0;
  Site to = 0;
  EventKind kind = EventKind::recovery;

  static Event recovery(double time, Site site) { return {time, 0.0, site, site, site, EventKind::recovery}; }
};

/// Arrow mark on the directed bond from -> to. Throws UsageError when the
/// sites are not adjacent.
Event make_arrow(const Lattice& lattice, double time, Site from, Site to, double mark = 0.0);

/// All Poisson clocks of the contact graphical representation on a lattice,
/// superposed: one rate-1 recovery clock per site and one rate-lambda arrow
/// clock per directed bond.
class ClockSet {
 public:
  ClockSet(const Lattice& lattice, double lambda);

  double total_rate() const { return total_; }
  double lambda() const { return lambda_; }
  std::size_t site_count() const { return sites_; }
  std::size_t directed_bond_count() const { return bonds_.size(); }

  /// Which clock rings next (time left unset). One 64-bit draw: its integer
  /// part picks the clock in proportion to rate, its fractional part within
  /// an arrow clock becomes the thinning mark.
  Event draw(RandomStream& stream) const {
    const double r = stream.uniform() * total_;
    if (r < static_cast<double>(sites_) || bonds_.empty()) {
      auto site = static_cast<Site>(r);
      if (site >= sites_) site = static_cast<Site>(sites_ - 1);
      return Event::recovery(0.0, site);
    }
    const double s = (r - static_cast<double>(sites_)) / lambda_;
    auto k = static_cast<std::uint32_t>(s);
    if (k >= bonds_.size()) k = static_cast<std::uint32_t>(bonds_.size() - 1);
    double mark = s - static_cast<double>(k);
    if (mark >= 1.0) mark = 0x1.fffffffffffffp-1;
    return {0.0, mark, k, bonds_[k].from, bonds_[k].to, EventKind::arrow};
  }

 private:
  std::size_t sites_;
  double lambda_;
  double total_;
  std::vector<DirectedBond> bonds_;
};

/// Marks in strictly increasing time order: exponential gaps at the total
/// rate, each assigned to a clock by ClockSet::draw. Equal in law to
/// independent Poisson clocks per site and per directed bond.
class TimedEventStream {
 public:
  TimedEventStream(const ClockSet& clocks, RandomStream& stream) : clocks_(clocks), stream_(stream) {}

  Event next();

 private:
  const ClockSet& clocks_;
  RandomStream& stream_;
  double now_ = 0.0;
};

/// A realised graphical representation on [0, horizon].
class EventLog {
 public:
  /// Validates: times strictly increasing inside (0, horizon], indices within
  /// the lattice, arrows along real bonds, marks in [0, 1).
  EventLog(const Lattice& lattice, double rate, double horizon, std::vector<Event> events);

  double rate() const { return rate_; }
  double horizon() const { return horizon_; }
  std::size_t site_count() const { return sites_; }
  std::span<const Event> events() const { return events_; }

  std::vector<double> recoveries_at(Site site) const;
  std::vector<double> arrows_on(std::size_t directed_bond) const;
  std::size_t arrow_count() const;
  std::size_t recovery_count() const { return events_.size() - arrow_count(); }

 private:
  std::size_t sites_;
  std::size_t directed_bonds_;
  double rate_;
  double horizon_;
  std::vector<Event> events_;
};

/// Recovery marks at rate 1 per site and arrows at rate lambda per directed
/// bond on (0, T].
EventLog gen_event_log(const Lattice& lattice, double lambda, double horizon, RandomStream& stream);

/// Keeps each arrow with probability lambda / log.rate() (mark below that
/// ratio) and rescales the kept marks to stay uniform.
EventLog thin(const Lattice& lattice, const EventLog& log, double lambda);

}  // namespace ips::contact
