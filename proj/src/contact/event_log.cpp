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

#include "ips/contact/event_log.hpp"

#include <algorithm>
#include <string>

#include "ips/core/error.hpp"

namespace ips::contact {

Event make_arrow(const Lattice& lattice, double time, Site from, Site to, double mark) {
  const auto bonds = lattice.directed_bonds();
  for (std::size_t k = 0; k < bonds.size(); ++k)
    if (bonds[k].from == from && bonds[k].to == to)
      return {time, mark, static_cast<std::uint32_t>(k), from, to, EventKind::arrow};
  throw UsageError("no bond " + std::to_string(from) + "->" + std::to_string(to));
}

ClockSet::ClockSet(const Lattice& lattice, double lambda)
    : sites_(lattice.site_count()), lambda_(lambda) {
  if (!(lambda >= 0.0)) throw DomainError("infection rate must be nonnegative");
  if (lambda > 0.0) bonds_.assign(lattice.directed_bonds().begin(), lattice.directed_bonds().end());
  total_ = static_cast<double>(sites_) + lambda * static_cast<double>(bonds_.size());
}

Event TimedEventStream::next() {
  double t;
  do {
    t = now_ + stream_.exponential(clocks_.total_rate());
  } while (t == now_);  // coincident marks: redraw the gap
  Event e = clocks_.draw(stream_);
  e.time = now_ = t;
  return e;
}

EventLog::EventLog(const Lattice& lattice, double rate, double horizon, std::vector<Event> events)
    : sites_(lattice.site_count()),
      directed_bonds_(lattice.directed_bonds().size()),
      rate_(rate),
      horizon_(horizon),
      events_(std::move(events)) {
  if (!(rate >= 0.0)) throw DomainError("infection rate must be nonnegative");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const auto bonds = lattice.directed_bonds();
  double prev = 0.0;
  for (const Event& e : events_) {
    if (!(e.time > prev) || e.time > horizon) throw UsageError("event times must increase strictly within (0, T]");
    prev = e.time;
    if (e.kind == EventKind::recovery) {
      if (e.clock >= sites_ || e.from != e.clock || e.to != e.clock) throw UsageError("bad recovery mark");
    } else {
      if (e.clock >= bonds.size() || bonds[e.clock].from != e.from || bonds[e.clock].to != e.to)
        throw UsageError("bad arrow mark");
      if (rate == 0.0) throw UsageError("arrow mark in a zero-rate log");
      if (!(e.mark >= 0.0 && e.mark < 1.0)) throw UsageError("thinning mark must lie in [0, 1)");
    }
  }
}

std::vector<double> EventLog::recoveries_at(Site site) const {
  if (site >= sites_) throw UsageError("site out of range");
  std::vector<double> out;
  for (const Event& e : events_)
    if (e.kind == EventKind::recovery && e.clock == site) out.push_back(e.time);
  return out;
}

std::vector<double> EventLog::arrows_on(std::size_t directed_bond) const {
  if (directed_bond >= directed_bonds_) throw UsageError("directed bond out of range");
  std::vector<double> out;
  for (const Event& e : events_)
    if (e.kind == EventKind::arrow && e.clock == directed_bond) out.push_back(e.time);
  return out;
}

std::size_t EventLog::arrow_count() const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [](const Event& e) { return e.kind == EventKind::arrow; }));
}

EventLog gen_event_log(const Lattice& lattice, double lambda, double horizon, RandomStream& stream) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const ClockSet clocks(lattice, lambda);
  TimedEventStream marks(clocks, stream);
  std::vector<Event> events;
  for (Event e = marks.next(); e.time <= horizon; e = marks.next()) events.push_back(e);
  return EventLog(lattice, lambda, horizon, std::move(events));
}

EventLog thin(const Lattice& lattice, const EventLog& log, double lambda) {
  if (!(lambda >= 0.0 && lambda <= log.rate())) throw DomainError("thinned rate must lie in [0, log rate]");
  std::vector<Event> kept;
  kept.reserve(log.events().size());
  const double ratio = log.rate() > 0.0 ? lambda / log.rate() : 0.0;
  for (Event e : log.events()) {
    if (e.kind == EventKind::arrow) {
      if (!(e.mark < ratio)) continue;
      e.mark = std::min(e.mark / ratio, 0x1.fffffffffffffp-1);
    }
    kept.push_back(e);
  }
  return EventLog(lattice, lambda, log.horizon(), std::move(kept));
}

}  // namespace ips::contact
