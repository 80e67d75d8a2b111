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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ips/contact/contact.hpp"
#include "ips/core/lattice.hpp"
#include "ips/core/replica.hpp"

namespace ips::cli {

enum class ExperimentKind {
  percolation_sweep,
  pc_estimate,
  contact_survival,
  lambda_c,
  growth,
  ergodic_average,
  nu_percolation,
  exclusion_tagged,
  exact_suite,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(std::string_view name);

struct PercolationSweepParams {
  std::size_t side = 0;
  std::vector<double> p_grid;
  std::size_t axis = 0;
};

struct PcEstimateParams {
  std::vector<std::size_t> sizes;
  std::vector<double> p_grid;
};

struct ContactSurvivalParams {
  std::vector<std::size_t> sides;
  Boundary boundary = Boundary::periodic;
  contact::InitialState initial = contact::InitialState::full;
  std::vector<double> lambdas;
  double horizon = 0.0;
};

struct LambdaCParams {
  std::vector<std::size_t> lengths;
  std::vector<double> lambdas;
  contact::LambdaCOptions options;
};

struct GrowthParams {
  std::vector<double> lambdas;
  double horizon = 0.0;
  std::size_t length = 0;
};

/// Time average of the indicator of `site` on a ring started fully infected.
struct ErgodicAverageParams {
  std::size_t length = 0;
  std::vector<double> lambdas;
  double horizon = 0.0;
  std::size_t site = 0;
};

struct NuPercolationParams {
  std::vector<double> lambdas;
  std::size_t side = 0;
  double horizon = 0.0;
};

struct ExclusionTaggedParams {
  double density = 0.0;
  std::size_t length = 0;
  std::vector<double> times;
};

struct ExactSuiteParams {
  double epsilon = 1e-8;
};

using ExperimentParams =
    std::variant<PercolationSweepParams, PcEstimateParams, ContactSurvivalParams, LambdaCParams, GrowthParams,
                 ErgodicAverageParams, NuPercolationParams, ExclusionTaggedParams, ExactSuiteParams>;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::exact_suite;
  ExperimentParams params;
  ReplicaPlan plan;
  /// Output path prefix: results go to <output>.csv, <output>.meta.json, ...
  std::string output;
  /// The parsed document with defaults filled in, echoed into meta.json.
  nlohmann::json echo;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// UsageError before anything is computed. `seed_override` replaces "seed".
ExperimentConfig parse_config(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override = {});
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});

}  // namespace ips::cli
