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

#include "ips/cli/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "ips/core/error.hpp"

namespace ips::cli {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 9> kNames{{
    {ExperimentKind::percolation_sweep, "percolation-sweep"},
    {ExperimentKind::pc_estimate, "pc-estimate"},
    {ExperimentKind::contact_survival, "contact-survival"},
    {ExperimentKind::lambda_c, "lambda-c"},
    {ExperimentKind::growth, "growth"},
    {ExperimentKind::ergodic_average, "ergodic-average"},
    {ExperimentKind::nu_percolation, "nu-percolation"},
    {ExperimentKind::exclusion_tagged, "exclusion-tagged"},
    {ExperimentKind::exact_suite, "exact-suite"},
}};

constexpr std::size_t kMaxSites = std::size_t{1} << 24;
constexpr std::size_t kMaxReplicas = 1'000'000'000;
constexpr double kMaxHorizon = 1e7;

bool is_nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Pulls typed fields out of a JSON object, remembering which keys were read
// so that leftovers can be rejected.
class Fields {
 public:
  explicit Fields(const json& doc) : doc_(doc) {
    if (!doc.is_object()) throw UsageError("config must be a JSON object");
  }

  bool has(const char* key) const { return doc_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    if (!doc_.contains(key)) throw UsageError(std::string("missing key \"") + key + "\"");
    return doc_.at(key);
  }

  double number(const char* key, double lo, double hi) {
    const json& v = raw(key);
    if (!v.is_number()) throw UsageError(std::string("\"") + key + "\" must be a number");
    return in_range(key, v.get<double>(), lo, hi);
  }
  double number(const char* key, double lo, double hi, double fallback) {
    return has(key) ? number(key, lo, hi) : (seen_.insert(key), fallback);
  }

  std::size_t count(const char* key, std::size_t lo, std::size_t hi) { return as_count(key, raw(key), lo, hi); }
  std::size_t count(const char* key, std::size_t lo, std::size_t hi, std::size_t fallback) {
    return has(key) ? count(key, lo, hi) : (seen_.insert(key), fallback);
  }

  std::string text(const char* key) {
    const json& v = raw(key);
    if (!v.is_string()) throw UsageError(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
  }
  std::string text(const char* key, std::string fallback) {
    return has(key) ? text(key) : (seen_.insert(key), std::move(fallback));
  }

  std::vector<double> grid(const char* key, double lo, double hi) {
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) throw UsageError(std::string("\"") + key + "\" must be a nonempty array");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw UsageError(std::string("\"") + key + "\" entries must be numbers");
      out.push_back(in_range(key, e.get<double>(), lo, hi));
      if (out.size() > 1 && !(out.back() > out[out.size() - 2]))
        throw UsageError(std::string("\"") + key + "\" must be strictly increasing");
    }
    return out;
  }

  std::vector<std::size_t> counts(const char* key, std::size_t lo, std::size_t hi, bool increasing) {
    const json& v = raw(key);
    if (!v.is_array() || v.empty()) throw UsageError(std::string("\"") + key + "\" must be a nonempty array");
    std::vector<std::size_t> out;
    for (const json& e : v) {
      out.push_back(as_count(key, e, lo, hi));
      if (increasing && out.size() > 1 && out.back() <= out[out.size() - 2])
        throw UsageError(std::string("\"") + key + "\" must be strictly increasing");
    }
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : doc_.items())
      if (!seen_.count(key)) throw UsageError("unknown key \"" + key + "\"");
  }

 private:
  static double in_range(const char* key, double x, double lo, double hi) {
    if (!std::isfinite(x) || x < lo || x > hi)
      throw UsageError(std::string("\"") + key + "\" out of range [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
    return x;
  }
  static std::size_t as_count(const char* key, const json& v, std::size_t lo, std::size_t hi) {
    if (!is_nonnegative_integer(v)) throw UsageError(std::string("\"") + key + "\" must be a nonnegative integer");
    const auto n = v.get<std::uint64_t>();
    if (n < lo || n > hi)
      throw UsageError(std::string("\"") + key + "\" out of range [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
    return static_cast<std::size_t>(n);
  }

  const json& doc_;
  std::set<std::string> seen_;
};

contact::InitialState initial_from(const std::string& s) {
  if (s == "full") return contact::InitialState::full;
  if (s == "single") return contact::InitialState::single;
  throw UsageError("\"initial\" must be \"full\" or \"single\"");
}

const char* initial_name(contact::InitialState s) { return s == contact::InitialState::full ? "full" : "single"; }

ExperimentParams parse_params(ExperimentKind kind, Fields& f, json& echo) {
  switch (kind) {
    case ExperimentKind::percolation_sweep: {
      PercolationSweepParams p;
      p.side = f.count("side", 1, 4096);
      p.p_grid = f.grid("p_grid", 0.0, 1.0);
      p.axis = f.count("axis", 0, 1, 0);
      echo.update({{"side", p.side}, {"p_grid", p.p_grid}, {"axis", p.axis}});
      return p;
    }
    case ExperimentKind::pc_estimate: {
      PcEstimateParams p;
      p.sizes = f.counts("sizes", 2, 4096, true);
      if (p.sizes.size() < 2) throw UsageError("\"sizes\" needs at least two window sizes");
      p.p_grid = f.grid("p_grid", 0.0, 1.0);
      if (!(p.p_grid.front() <= 0.5 && p.p_grid.back() >= 0.5)) throw UsageError("\"p_grid\" must bracket 0.5");
      echo.update({{"sizes", p.sizes}, {"p_grid", p.p_grid}});
      return p;
    }
    case ExperimentKind::contact_survival: {
      ContactSurvivalParams p;
      p.sides = f.counts("sides", 1, kMaxSites, false);
      if (p.sides.size() > 3) throw UsageError("\"sides\" supports 1 to 3 dimensions");
      p.boundary = boundary_from_string(f.text("boundary", "periodic"));
      std::size_t n = 1;
      for (auto s : p.sides) {
        if (p.boundary == Boundary::periodic && s < 3) throw UsageError("periodic sides must be at least 3");
        n *= s;
        if (n > kMaxSites) throw UsageError("window too large");
      }
      p.initial = initial_from(f.text("initial", "full"));
      p.lambdas = f.grid("lambda_grid", 0.0, 1e4);
      p.horizon = f.number("horizon", 1e-9, kMaxHorizon);
      echo.update({{"sides", p.sides},
                   {"boundary", std::string(to_string(p.boundary))},
                   {"initial", initial_name(p.initial)},
                   {"lambda_grid", p.lambdas},
                   {"horizon", p.horizon}});
      return p;
    }
    case ExperimentKind::lambda_c: {
      LambdaCParams p;
      p.lengths = f.counts("lengths", 3, kMaxSites, true);
      if (p.lengths.size() < 2) throw UsageError("\"lengths\" needs at least two ring lengths");
      p.lambdas = f.grid("lambda_grid", 0.0, 1e4);
      if (p.lambdas.size() < 2) throw UsageError("\"lambda_grid\" needs at least two points");
      p.options.time_factor = f.number("time_factor", 1e-6, 1e4, 1.0);
      p.options.initial = initial_from(f.text("initial", "full"));
      if (p.options.time_factor * static_cast<double>(p.lengths.back()) > kMaxHorizon)
        throw UsageError("horizon time_factor * length too large");
      echo.update({{"lengths", p.lengths},
                   {"lambda_grid", p.lambdas},
                   {"time_factor", p.options.time_factor},
                   {"initial", initial_name(p.options.initial)}});
      return p;
    }
    case ExperimentKind::growth: {
      GrowthParams p;
      p.lambdas = f.grid("lambda_grid", 0.0, 1e4);
      p.horizon = f.number("horizon", 1e-9, kMaxHorizon);
      p.length = f.count("length", 3, kMaxSites);
      echo.update({{"lambda_grid", p.lambdas}, {"horizon", p.horizon}, {"length", p.length}});
      return p;
    }
    case ExperimentKind::ergodic_average: {
      ErgodicAverageParams p;
      p.length = f.count("length", 3, kMaxSites);
      p.lambdas = f.grid("lambda_grid", 0.0, 1e4);
      p.horizon = f.number("horizon", 1e-9, kMaxHorizon);
      p.site = f.count("site", 0, p.length - 1, 0);
      echo.update({{"length", p.length}, {"lambda_grid", p.lambdas}, {"horizon", p.horizon}, {"site", p.site}});
      return p;
    }
    case ExperimentKind::nu_percolation: {
      NuPercolationParams p;
      p.lambdas = f.grid("lambda_grid", 0.0, 1e4);
      if (p.lambdas.size() > 64) throw UsageError("\"lambda_grid\" holds at most 64 rates");
      p.side = f.count("side", 3, 4096);
      p.horizon = f.number("horizon", 1e-9, kMaxHorizon);
      echo.update({{"lambda_grid", p.lambdas}, {"side", p.side}, {"horizon", p.horizon}});
      return p;
    }
    case ExperimentKind::exclusion_tagged: {
      ExclusionTaggedParams p;
      p.density = f.number("density", 0.0, 1.0);
      if (p.density == 0.0 || p.density == 1.0) throw UsageError("\"density\" must lie strictly between 0 and 1");
      p.length = f.count("length", 3, std::size_t{1} << 30);
      p.times = f.grid("times", 0.0, kMaxHorizon);
      if (!(p.times.front() > 0.0)) throw UsageError("\"times\" must be positive");
      echo.update({{"density", p.density}, {"length", p.length}, {"times", p.times}});
      return p;
    }
    case ExperimentKind::exact_suite: {
      ExactSuiteParams p;
      p.epsilon = f.number("epsilon", 1e-15, 1e-6, 1e-8);
      echo.update({{"epsilon", p.epsilon}});
      return p;
    }
  }
  throw UsageError("unhandled experiment");
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "?";
}

std::optional<ExperimentKind> experiment_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  return std::nullopt;
}

ExperimentConfig parse_config(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override) {
  Fields f(doc);
  ExperimentConfig c;
  const std::string name = f.text("experiment");
  const auto kind = experiment_from_string(name);
  if (!kind) throw UsageError("unknown experiment \"" + name + "\"");
  c.kind = *kind;
  c.output = f.text("output");
  if (c.output.empty()) throw UsageError("\"output\" must be a nonempty path prefix");

  const bool needs_replicas = c.kind != ExperimentKind::exact_suite;
  c.plan.replicas = needs_replicas ? f.count("replicas", 1, kMaxReplicas) : f.count("replicas", 1, kMaxReplicas, 1);
  if (f.has("seed")) {
    const json& s = f.raw("seed");
    if (!is_nonnegative_integer(s)) throw UsageError("\"seed\" must be a nonnegative integer");
    c.plan.master_seed = s.get<std::uint64_t>();
  } else if (!seed_override) {
    f.raw("seed");
  }
  if (seed_override) c.plan.master_seed = *seed_override;

  c.echo = {{"experiment", name}, {"output", c.output}, {"seed", c.plan.master_seed}, {"replicas", c.plan.replicas}};
  c.params = parse_params(c.kind, f, c.echo);
  f.reject_unknown();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, seed_override);
}

}  // namespace ips::cli
