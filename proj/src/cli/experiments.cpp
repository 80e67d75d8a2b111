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

#include "ips/cli/experiments.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "ips/contact/contact.hpp"
#include "ips/core/error.hpp"
#include "ips/exact/checks.hpp"
#include "ips/exclusion/exclusion.hpp"
#include "ips/percolation/percolation.hpp"

#ifndef IPS_VERSION
#define IPS_VERSION "0.0.0"
#endif

namespace ips::cli {

namespace {

using nlohmann::json;

std::string num(double x) { return format_number(x); }
std::string num(std::size_t x) { return format_number(x); }

json crossings_json(const CriticalPoint& c, std::span<const std::size_t> sizes) {
  json pairs = json::array();
  for (std::size_t i = 0; i < c.pairwise.size(); ++i)
    pairs.push_back({{"sizes", {sizes[i], sizes[i + 1]}},
                     {"location", c.pairwise[i].location},
                     {"uncertainty", c.pairwise[i].uncertainty}});
  return {{"estimate", c.estimate}, {"uncertainty", c.uncertainty}, {"pairwise", pairs}};
}

ExperimentResult run(const PercolationSweepParams& p, const ReplicaPlan& plan, Execution exec) {
  const auto sweep = percolation::crossing_sweep(Lattice::square(p.side, Boundary::free), p.p_grid, plan, p.axis, exec);
  ExperimentResult r;
  r.table.columns = {"side", "p", "estimate", "stderr", "replicas"};
  for (std::size_t i = 0; i < sweep.grid.size(); ++i)
    r.table.add({num(p.side), num(sweep.grid[i]), num(sweep.estimates[i].mean), num(sweep.estimates[i].std_error),
                 num(sweep.estimates[i].replicas)});
  return r;
}

ExperimentResult run(const PcEstimateParams& p, const ReplicaPlan& plan, Execution) {
  const auto pc = percolation::estimate_pc(p.sizes, p.p_grid, plan);
  ExperimentResult r;
  r.table.columns = {"side", "p", "estimate", "stderr", "replicas"};
  for (const auto& curve : pc.curves)
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
      r.table.add({num(curve.side), num(curve.grid[i]), num(curve.estimates[i].mean),
                   num(curve.estimates[i].std_error), num(curve.estimates[i].replicas)});
  r.summary = {{"p_c", crossings_json(pc.critical, p.sizes)}};
  return r;
}

ExperimentResult run(const ContactSurvivalParams& p, const ReplicaPlan& plan, Execution exec) {
  const Lattice lattice(p.sides, p.boundary);
  const std::size_t n = lattice.site_count();
  const SpinConfig start = p.initial == contact::InitialState::full ? SpinConfig::full(n)
                                                                    : SpinConfig::from_indices(n, {Site{0}});
  const auto est = contact::survival_curve(lattice, start, p.lambdas, p.horizon, plan, exec);
  ExperimentResult r;
  r.table.columns = {"lambda", "horizon", "estimate", "stderr", "replicas"};
  for (std::size_t i = 0; i < est.size(); ++i)
    r.table.add({num(p.lambdas[i]), num(p.horizon), num(est[i].mean), num(est[i].std_error), num(est[i].replicas)});
  return r;
}

ExperimentResult run(const LambdaCParams& p, const ReplicaPlan& plan, Execution) {
  const auto lc = contact::estimate_lambda_c(p.lengths, p.lambdas, plan, p.options);
  ExperimentResult r;
  r.table.columns = {"length", "horizon", "lambda", "estimate", "stderr", "replicas"};
  for (const auto& c : lc.curves)
    for (std::size_t i = 0; i < c.lambdas.size(); ++i)
      r.table.add({num(c.length), num(c.horizon), num(c.lambdas[i]), num(c.estimates[i].mean),
                   num(c.estimates[i].std_error), num(c.estimates[i].replicas)});
  r.summary = {{"lambda_c", crossings_json(lc.critical, p.lengths)}};
  return r;
}

ExperimentResult run(const GrowthParams& p, const ReplicaPlan& plan, Execution) {
  ExperimentResult r;
  r.table.columns = {"lambda", "horizon", "mean_rate", "stderr", "survivors", "extinct", "touched", "p05", "replicas"};
  for (double lambda : p.lambdas) {
    const auto g = contact::growth_rate(lambda, p.horizon, p.length, plan);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool any = !g.rates.empty();
    r.table.add({num(lambda), num(p.horizon), num(any ? g.mean_rate.mean : nan), num(any ? g.mean_rate.std_error : nan),
                 num(g.rates.size()), num(g.extinct), num(g.touched), num(any ? g.p05 : nan), num(g.replicas)});
  }
  return r;
}

ExperimentResult run(const ErgodicAverageParams& p, const ReplicaPlan& plan, Execution exec) {
  const Lattice ring = Lattice::ring(p.length);
  const auto f = contact::LocalObservable::site_indicator(static_cast<Site>(p.site));
  ExperimentResult r;
  r.table.columns = {"lambda", "horizon", "site", "estimate", "stderr", "replicas"};
  for (double lambda : p.lambdas) {
    const auto averages = map_replicas(
        plan.replicas,
        [&](std::size_t i) {
          RandomStream stream = plan.stream(i, StreamPurpose::contact_events);
          return contact::time_average(ring, SpinConfig::full(p.length), lambda, p.horizon, f, stream);
        },
        exec);
    const Estimate e = summarize(averages);
    r.table.add({num(lambda), num(p.horizon), num(p.site), num(e.mean), num(e.std_error), num(e.replicas)});
  }
  return r;
}

ExperimentResult run(const NuPercolationParams& p, const ReplicaPlan& plan, Execution exec) {
  const auto rows = nu_percolation_experiment(p.lambdas, p.side, p.horizon, plan, exec);
  ExperimentResult r;
  r.table.columns = {"lambda",        "side",   "horizon",      "median_fraction", "q25_fraction",
                     "q75_fraction",  "mean_fraction", "stderr", "mean_density", "replicas"};
  json medians = json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    r.table.add({num(row.lambda), num(p.side), num(p.horizon), num(row.median), num(row.q25), num(row.q75),
                 num(row.mean_fraction.mean), num(row.mean_fraction.std_error), num(row.density.mean),
                 num(row.mean_fraction.replicas)});
    medians.push_back(row.median);
    if (i > 0 && row.median < rows[i - 1].median) monotone = false;
  }
  r.summary = {{"medians", medians}, {"monotone_medians", monotone}};
  return r;
}

ExperimentResult run(const ExclusionTaggedParams& p, const ReplicaPlan& plan, Execution exec) {
  const auto v = exclusion::tagged_variance(p.density, p.length, p.times, plan, exec);
  ExperimentResult r;
  r.table.columns = {"t", "variance", "stderr", "replicas"};
  std::vector<double> var, weight;
  bool fittable = p.times.size() >= 3;
  for (std::size_t i = 0; i < v.times.size(); ++i) {
    const Estimate& e = v.variance[i];
    r.table.add({num(v.times[i]), num(e.mean), num(e.std_error), num(e.replicas)});
    var.push_back(e.mean);
    if (e.mean > 0.0 && e.std_error > 0.0) {
      weight.push_back((e.mean * e.mean) / (e.std_error * e.std_error));
    } else {
      fittable = false;
    }
  }
  json fit = nullptr;
  if (fittable && std::log10(p.times.back() / p.times.front()) >= 1.5) {
    const auto s = exclusion::fit_scaling_exponent(v.times, var, weight);
    fit = {{"slope", s.slope}, {"intercept", s.intercept}, {"half_width", s.half_width}};
  }
  r.summary = {{"length", p.length},
               {"density", p.density},
               {"max_abs_displacement", v.max_abs_displacement},
               {"fit", fit}};
  return r;
}

json suite_json(const exact::SuiteReport& s) {
  json checks = json::array();
  for (const auto& c : s.checks)
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"kind", c.kind}, {"passed", c.passed}});
  return {{"checks", checks}, {"passed", s.passed()}, {"elapsed_seconds", s.elapsed_seconds}};
}

ExperimentResult run(const ExactSuiteParams& p, const ReplicaPlan&, Execution) {
  const auto s = exact::run_default_suite(p.epsilon);
  ExperimentResult r;
  r.table.columns = {"check", "value", "threshold", "kind", "passed"};
  for (const auto& c : s.checks)
    r.table.add({c.name, num(c.value), num(c.threshold), c.kind, c.passed ? "true" : "false"});
  r.summary = suite_json(s);
  r.passed = s.passed();
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, Execution exec) {
  config.plan.validate();
  return std::visit([&](const auto& p) { return run(p, config.plan, exec); }, config.params);
}

std::vector<NuPercolationRow> nu_percolation_experiment(std::span<const double> lambdas, std::size_t side,
                                                        double horizon, const ReplicaPlan& plan, Execution exec) {
  plan.validate();
  require_strictly_increasing(lambdas, "rate grid");
  if (lambdas.empty() || lambdas.size() > contact::CoupledContact::kMaxCopies)
    throw UsageError("nu-percolation takes 1..64 rates");
  if (!(lambdas.front() >= 0.0)) throw DomainError("infection rates must be nonnegative");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be finite and positive");
  const Lattice window = Lattice::square(side, Boundary::periodic);
  const std::size_t n = window.site_count();
  const double lambda_max = lambdas.back();
  const contact::ClockSet clocks(window, lambda_max);

  struct Sample {
    std::vector<double> fraction;
    std::vector<double> density;
  };
  const auto samples = map_replicas(
      plan.replicas,
      [&](std::size_t r) {
        RandomStream stream = plan.stream(r, StreamPurpose::contact_events);
        contact::CoupledContact state(n, lambdas, lambda_max);
        state.reset(SpinConfig::full(n));
        contact::run_marks(state, clocks, horizon, stream);
        Sample s;
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
          const SpinConfig eta = state.state(k);
          const auto clusters = percolation::site_cluster(window, eta);
          s.fraction.push_back(static_cast<double>(clusters.largest()) / static_cast<double>(n));
          s.density.push_back(static_cast<double>(eta.count()) / static_cast<double>(n));
        }
        return s;
      },
      exec);

  std::vector<NuPercolationRow> rows;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    NuPercolationRow row;
    row.lambda = lambdas[k];
    std::vector<double> density;
    for (const auto& s : samples) {
      row.fractions.push_back(s.fraction[k]);
      density.push_back(s.density[k]);
    }
    row.median = quantile(row.fractions, 0.5);
    row.q25 = quantile(row.fractions, 0.25);
    row.q75 = quantile(row.fractions, 0.75);
    row.mean_fraction = summarize(row.fractions);
    row.density = summarize(density);
    rows.push_back(std::move(row));
  }
  return rows;
}

int run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& err) {
  try {
    if (options.threads) {
      if (*options.threads < 1) throw UsageError("--threads must be at least 1");
      set_thread_count(*options.threads);
    }
    const ExperimentConfig config = load_config(config_path, options.seed);
    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult result = run_experiment(config);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostringstream csv;
    write_csv(csv, result.table);
    const json meta = {{"config", config.echo},
                       {"seed", config.plan.master_seed},
                       {"version", IPS_VERSION},
                       {"elapsed_seconds", elapsed}};

    const std::filesystem::path prefix(config.output);
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    write_text(config.output + ".csv", csv.str());
    write_text(config.output + ".meta.json", meta.dump(2) + "\n");
    if (!result.summary.is_null()) write_text(config.output + ".summary.json", result.summary.dump(2) + "\n");

    if (!result.passed) {
      err << "ips: " << to_string(config.kind) << ": some checks failed (see " << config.output << ".summary.json)\n";
      return kExitDiagnostic;
    }
    return kExitOk;
  } catch (const DiagnosticError& e) {
    err << "ips: diagnostic failure: " << e.what() << '\n';
    return kExitDiagnostic;
  } catch (const UsageError& e) {
    err << "ips: invalid config: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "ips: invalid config: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CapacityError& e) {
    err << "ips: invalid config: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "ips: " << e.what() << '\n';
    return 1;
  }
}

int run_exact(const std::string& suite, std::ostream& out, std::ostream& err) {
  if (suite != "default") {
    err << "ips: unknown suite \"" << suite << "\" (available: default)\n";
    return kExitValidation;
  }
  const auto report = exact::run_default_suite();
  out << suite_json(report).dump(2) << '\n';
  return report.passed() ? kExitOk : kExitDiagnostic;
}

}  // namespace ips::cli
