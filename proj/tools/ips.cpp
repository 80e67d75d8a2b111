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

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ips/cli/experiments.hpp"
#include "ips/core/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ips: interacting particle system experiments"};
  app.require_subcommand(1);

  std::string config;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config, "Config file")->required();
  run->add_option("--threads", threads, "Worker threads (default: all cores)");
  run->add_option("--seed", seed, "Override the config's master seed");

  std::string csv, kind, output;
  auto* plot = app.add_subcommand("plot", "Emit a matplotlib script for a result CSV");
  plot->add_option("csv", csv, "Result CSV")->required();
  plot->add_option("--kind", kind, "Experiment kind that produced the CSV")->required();
  plot->add_option("-o,--output", output, "Script path (default: <csv stem>.plot.py)");

  std::string suite = "default";
  auto* exact = app.add_subcommand("exact", "Run an exhaustive exact-check suite and print its JSON report");
  exact->add_option("--suite", suite, "Suite name")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ips::cli::kExitValidation;
  }

  if (*run) return ips::cli::run(config, {threads, seed}, std::cerr);
  if (*exact) return ips::cli::run_exact(suite, std::cout, std::cerr);

  try {
    std::optional<std::filesystem::path> out;
    if (!output.empty()) out = output;
    std::cout << ips::cli::emit_plot(csv, kind, out).string() << '\n';
    return ips::cli::kExitOk;
  } catch (const ips::UsageError& e) {
    std::cerr << "ips: " << e.what() << '\n';
    return ips::cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "ips: " << e.what() << '\n';
    return 1;
  }
}
