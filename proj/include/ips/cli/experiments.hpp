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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ips/cli/config.hpp"
#include "ips/core/replica.hpp"

namespace ips::cli {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitDiagnostic = 3 };

/// Header plus rows of preformatted cells.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

/// Shortest round-trip text for a double ("%.17g").
std::string format_number(double x);
std::string format_number(std::size_t x);

void write_csv(std::ostream& os, const ResultTable& table);

struct ExperimentResult {
  ResultTable table;
  /// Estimator or checker report; null when the experiment has none.
  nlohmann::json summary;
  /// False when a checker suite ran to completion but some check failed.
  bool passed = true;
};

/// Runs one experiment. Throws UsageError / DomainError on invalid input and
/// DiagnosticError on a failed diagnostic.
ExperimentResult run_experiment(const ExperimentConfig& config, Execution exec = Execution::parallel);

struct NuPercolationRow {
  double lambda = 0.0;
  /// Largest occupied cluster / window sites, per replica.
  std::vector<double> fractions;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  Estimate mean_fraction;
  Estimate density;
};

/// Largest-cluster fraction of finite-horizon upper invariant samples on a
/// periodic side x side window. All rates of a replica share one thinned mark
/// stream, so fractions are coupled across the ascending rate grid.
std::vector<NuPercolationRow> nu_percolation_experiment(std::span<const double> lambdas, std::size_t side,
                                                        double horizon, const ReplicaPlan& plan,
                                                        Execution exec = Execution::parallel);

struct RunOptions {
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

/// Full `ips run`: parse, compute, then write <prefix>.csv, <prefix>.meta.json
/// and (when present) <prefix>.summary.json. Nothing is written unless the
/// experiment completes. Messages go to `err`.
int run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& err);

/// `ips exact --suite default`: prints the JSON report to `out`.
int run_exact(const std::string& suite, std::ostream& out, std::ostream& err);

/// Writes a self-contained matplotlib script rendering a result CSV and
/// returns its path (default: the CSV path with extension ".plot.py").
/// Throws UsageError on an unknown kind or a malformed/empty CSV; no file is
/// written then.
std::filesystem::path emit_plot(const std::filesystem::path& csv, const std::string& kind,
                                std::optional<std::filesystem::path> output = {});

}  // namespace ips::cli
