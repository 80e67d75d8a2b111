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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ips/cli/config.hpp"
#include "ips/cli/experiments.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ips::cli;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ips_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const json& doc, const std::string& name = "config.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p;
  }
  std::string prefix(const std::string& stem) const { return (dir_ / stem).string(); }

  int run_config(const json& doc, std::string* err_out = nullptr, RunOptions options = {}) {
    std::ostringstream err;
    const int code = run(write_config(doc), options, err);
    if (err_out) *err_out = err.str();
    return code;
  }

  fs::path dir_;
};

json sweep(const std::string& output) {
  return {{"experiment", "percolation-sweep"}, {"output", output}, {"seed", 3}, {"replicas", 50},
          {"side", 8},                          {"p_grid", {0.0, 0.5, 1.0}}};
}

TEST(Config, ParsesWithDefaults) {
  const auto c = parse_config(json{{"experiment", "lambda-c"},
                                   {"output", "x"},
                                   {"seed", 9},
                                   {"replicas", 10},
                                   {"lengths", {8, 16}},
                                   {"lambda_grid", {1.0, 2.0}}});
  EXPECT_EQ(c.kind, ExperimentKind::lambda_c);
  EXPECT_EQ(c.plan.master_seed, 9u);
  const auto& p = std::get<LambdaCParams>(c.params);
  EXPECT_EQ(p.options.time_factor, 1.0);
  EXPECT_EQ(p.options.initial, ips::contact::InitialState::full);
  EXPECT_EQ(c.echo.at("time_factor"), 1.0);
  EXPECT_EQ(c.echo.at("initial"), "full");
}

TEST(Config, SeedOverride) {
  EXPECT_EQ(parse_config(sweep("x"), 77).plan.master_seed, 77u);
  json no_seed = sweep("x");
  no_seed.erase("seed");
  EXPECT_THROW(parse_config(no_seed), ips::UsageError);
  EXPECT_EQ(parse_config(no_seed, 5).plan.master_seed, 5u);
}

TEST(Config, StrictRejections) {
  auto bad = [](auto edit) {
    json doc = sweep("x");
    edit(doc);
    EXPECT_THROW(parse_config(doc), ips::UsageError) << doc.dump();
  };
  bad([](json& d) { d["colour"] = "red"; });
  bad([](json& d) { d["experiment"] = "nope"; });
  bad([](json& d) { d["replicas"] = 0; });
  bad([](json& d) { d["replicas"] = -3; });
  bad([](json& d) { d["replicas"] = 2.5; });
  bad([](json& d) { d["side"] = "eight"; });
  bad([](json& d) { d["p_grid"] = {0.5, 0.4}; });
  bad([](json& d) { d["p_grid"] = {0.5, 1.5}; });
  bad([](json& d) { d["p_grid"] = json::array(); });
  bad([](json& d) { d["axis"] = 2; });
  bad([](json& d) { d["output"] = ""; });
  bad([](json& d) { d["seed"] = -1; });
  bad([](json& d) { d.erase("side"); });
  EXPECT_THROW(parse_config(json::array()), ips::UsageError);
  EXPECT_THROW(parse_config(json{{"experiment", "pc-estimate"}, {"output", "x"}, {"seed", 1}, {"replicas", 1},
                                 {"sizes", {16}}, {"p_grid", {0.4, 0.6}}}),
               ips::UsageError);
  EXPECT_THROW(parse_config(json{{"experiment", "pc-estimate"}, {"output", "x"}, {"seed", 1}, {"replicas", 1},
                                 {"sizes", {8, 16}}, {"p_grid", {0.6, 0.7}}}),
               ips::UsageError);
  EXPECT_THROW(parse_config(json{{"experiment", "exclusion-tagged"}, {"output", "x"}, {"seed", 1}, {"replicas", 1},
                                 {"density", 0.0}, {"length", 64}, {"times", {1, 2}}}),
               ips::UsageError);
  EXPECT_THROW(parse_config(json{{"experiment", "contact-survival"}, {"output", "x"}, {"seed", 1}, {"replicas", 1},
                                 {"sides", {2}}, {"lambda_grid", {1}}, {"horizon", 1}}),
               ips::UsageError);
}

TEST(Format, RoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::size_t{12}), "12");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST_F(CliTest, SweepExtremesAndFiles) {
  ASSERT_EQ(run_config(sweep(prefix("sweep"))), kExitOk);
  const std::string csv = slurp(prefix("sweep") + ".csv");
  EXPECT_NE(csv.find("\n8,0,0,0,50\n"), std::string::npos);
  EXPECT_NE(csv.find("\n8,1,1,0,50\n"), std::string::npos);
  const auto meta = json::parse(slurp(prefix("sweep") + ".meta.json"));
  EXPECT_EQ(meta.at("seed"), 3);
  EXPECT_TRUE(meta.contains("version"));
  EXPECT_TRUE(meta.contains("elapsed_seconds"));
  EXPECT_EQ(meta.at("config").at("side"), 8);
  EXPECT_EQ(meta.size(), 4u);
  EXPECT_FALSE(fs::exists(prefix("sweep") + ".summary.json"));
}

TEST_F(CliTest, ByteIdenticalReruns) {
  const json doc = json{{"experiment", "lambda-c"},     {"output", prefix("lc")}, {"seed", 4},
                        {"replicas", 200},              {"lengths", {8, 16}},
                        {"lambda_grid", {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}}};
  ASSERT_EQ(run_config(doc), kExitOk);
  const std::string first = slurp(prefix("lc") + ".csv");
  ASSERT_EQ(run_config(doc, nullptr, RunOptions{1, {}}), kExitOk);
  EXPECT_EQ(slurp(prefix("lc") + ".csv"), first);
  ASSERT_EQ(run_config(doc, nullptr, RunOptions{{}, 5}), kExitOk);
  EXPECT_NE(slurp(prefix("lc") + ".csv"), first);
  EXPECT_EQ(json::parse(slurp(prefix("lc") + ".meta.json")).at("seed"), 5);
  const auto summary = json::parse(slurp(prefix("lc") + ".summary.json"));
  EXPECT_TRUE(summary.at("lambda_c").contains("estimate"));
}

TEST_F(CliTest, ValidationFailureWritesNothing) {
  json doc = sweep(prefix("bad"));
  doc["p_grid"] = {0.2, 1.2};
  std::string err;
  EXPECT_EQ(run_config(doc, &err), kExitValidation);
  EXPECT_NE(err.find("p_grid"), std::string::npos);
  EXPECT_FALSE(fs::exists(prefix("bad") + ".csv"));
  EXPECT_FALSE(fs::exists(prefix("bad") + ".meta.json"));
  std::ostringstream e2;
  EXPECT_EQ(run(dir_ / "missing.json", {}, e2), kExitValidation);
  std::ofstream(dir_ / "broken.json") << "{\"experiment\": ";
  EXPECT_EQ(run(dir_ / "broken.json", {}, e2), kExitValidation);
  EXPECT_EQ(run_config(sweep(prefix("t")), nullptr, RunOptions{0, {}}), kExitValidation);
}

TEST_F(CliTest, DiagnosticFailureExitThree) {
  const json doc = json{{"experiment", "lambda-c"},     {"output", prefix("nc")}, {"seed", 4},
                        {"replicas", 100},              {"lengths", {8, 16}},
                        {"lambda_grid", {3.5, 4.0, 4.5}}};
  std::string err;
  EXPECT_EQ(run_config(doc, &err), kExitDiagnostic);
  EXPECT_NE(err.find("no crossing"), std::string::npos);
  EXPECT_FALSE(fs::exists(prefix("nc") + ".csv"));
}

TEST_F(CliTest, ExactSuiteReport) {
  ASSERT_EQ(run_config(json{{"experiment", "exact-suite"}, {"output", prefix("exact")}, {"seed", 1}}), kExitOk);
  const auto summary = json::parse(slurp(prefix("exact") + ".summary.json"));
  EXPECT_TRUE(summary.at("passed").get<bool>());
  for (const auto& c : summary.at("checks")) {
    EXPECT_TRUE(c.at("passed").get<bool>()) << c.dump();
    EXPECT_TRUE(c.at("kind") == "max" || c.at("kind") == "min");
  }
  std::ostringstream out, err;
  EXPECT_EQ(run_exact("default", out, err), kExitOk);
  EXPECT_TRUE(json::parse(out.str()).at("passed").get<bool>());
  EXPECT_EQ(run_exact("other", out, err), kExitValidation);
}

TEST_F(CliTest, EveryExperimentKindRuns) {
  const std::vector<json> docs{
      {{"experiment", "pc-estimate"}, {"sizes", {4, 8}}, {"p_grid", {0.2, 0.35, 0.5, 0.65, 0.8}}, {"replicas", 400}},
      {{"experiment", "contact-survival"}, {"sides", {5, 5}}, {"lambda_grid", {0.5, 1.0}}, {"horizon", 2.0},
       {"initial", "single"}, {"replicas", 50}},
      {{"experiment", "growth"}, {"lambda_grid", {2.0, 3.0}}, {"horizon", 5.0}, {"length", 101}, {"replicas", 30}},
      {{"experiment", "ergodic-average"}, {"length", 8}, {"lambda_grid", {1.0}}, {"horizon", 5.0}, {"replicas", 30}},
      {{"experiment", "nu-percolation"}, {"lambda_grid", {0.0, 2.0, 6.0}}, {"side", 8}, {"horizon", 3.0},
       {"replicas", 20}},
      {{"experiment", "exclusion-tagged"}, {"density", 0.5}, {"length", 256}, {"times", {1, 4, 16, 64}},
       {"replicas", 100}},
  };
  for (json doc : docs) {
    const std::string stem = doc.at("experiment").get<std::string>();
    doc["output"] = prefix(stem);
    doc["seed"] = 2;
    std::string err;
    ASSERT_EQ(run_config(doc, &err), kExitOk) << stem << ": " << err;
    const std::string csv = slurp(prefix(stem) + ".csv");
    EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 1) << stem;
    const fs::path script = emit_plot(prefix(stem) + ".csv", stem);
    EXPECT_TRUE(fs::exists(script)) << stem;
  }
  const auto exclusion = json::parse(slurp(prefix("exclusion-tagged") + ".summary.json"));
  EXPECT_TRUE(exclusion.at("fit").contains("slope"));
  const auto nu = json::parse(slurp(prefix("nu-percolation") + ".summary.json"));
  EXPECT_EQ(nu.at("medians").size(), 3u);
}

TEST_F(CliTest, PlotScripts) {
  ASSERT_EQ(run_config(json{{"experiment", "lambda-c"}, {"output", prefix("lc")}, {"seed", 4}, {"replicas", 200},
                            {"lengths", {8, 16}}, {"lambda_grid", {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}}}),
            kExitOk);
  const auto script = emit_plot(prefix("lc") + ".csv", "lambda-c");
  EXPECT_EQ(script, fs::path(prefix("lc") + ".plot.py"));
  const std::string py = slurp(script);
  EXPECT_NE(py.find("length=8"), std::string::npos);
  EXPECT_NE(py.find("length=16"), std::string::npos);
  EXPECT_NE(py.find("errorbar"), std::string::npos);

  std::ofstream(dir_ / "ex.csv") << "t,variance,stderr,replicas\n10,3,0.1,100\n100,9.5,0.3,100\n1000,30,1,100\n";
  const std::string loglog = slurp(emit_plot(dir_ / "ex.csv", "exclusion-tagged", dir_ / "ex.py"));
  EXPECT_NE(loglog.find("set_xscale(\"log\")"), std::string::npos);
  EXPECT_NE(loglog.find("fitted slope 0.5"), std::string::npos);
}

TEST_F(CliTest, PlotRejectsBadInput) {
  std::ofstream(dir_ / "empty.csv") << "";
  EXPECT_THROW(emit_plot(dir_ / "empty.csv", "growth"), ips::UsageError);
  EXPECT_FALSE(fs::exists(dir_ / "empty.plot.py"));
  std::ofstream(dir_ / "header.csv") << "lambda,horizon,mean_rate,stderr\n";
  EXPECT_THROW(emit_plot(dir_ / "header.csv", "growth"), ips::UsageError);
  std::ofstream(dir_ / "ragged.csv") << "t,variance,stderr,replicas\n1,2,3\n";
  EXPECT_THROW(emit_plot(dir_ / "ragged.csv", "exclusion-tagged"), ips::UsageError);
  std::ofstream(dir_ / "text.csv") << "t,variance,stderr,replicas\n1,two,3,4\n";
  EXPECT_THROW(emit_plot(dir_ / "text.csv", "exclusion-tagged"), ips::UsageError);
  std::ofstream(dir_ / "ok.csv") << "t,variance,stderr,replicas\n1,2,3,4\n";
  EXPECT_THROW(emit_plot(dir_ / "ok.csv", "growth"), ips::UsageError);
  EXPECT_THROW(emit_plot(dir_ / "ok.csv", "exact-suite"), ips::UsageError);
  EXPECT_FALSE(fs::exists(dir_ / "ok.plot.py"));
}

TEST(NuPercolation, ExtremesAndMonotoneMedians) {
  const std::vector<double> lambdas{0.0, 3.0, 10.0};
  const auto rows = nu_percolation_experiment(lambdas, 64, 50.0, ips::ReplicaPlan{8, 12});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].median, 0.0);
  EXPECT_EQ(rows[0].density.mean, 0.0);
  EXPECT_GT(rows[2].median, 0.5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].median, rows[i - 1].median);
    for (std::size_t r = 0; r < rows[i].fractions.size(); ++r)
      EXPECT_GE(rows[i].fractions[r], rows[i - 1].fractions[r]);
  }
}

}  // namespace
