// Copyright 2026 The pulsered Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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
#include <string>

#include <json.hpp>

#include "pulsered_cli/commands.hpp"

namespace pulsered::cli {
namespace {

namespace fs = std::filesystem;

fs::path config(const std::string& name) { return fs::path(PULSERED_CONFIG_DIR) / (name + ".yaml"); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pulsered_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

template <typename F>
Outcome invoke(F command, const RunManifest& m) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = command(m, out, err);
  return {code, out.str(), err.str()};
}

TEST(CmdRun, WritesAllOutputsDeterministically) {
  RunManifest m;
  m.config_path = config("interaction");
  m.out_dir = fresh_dir("run_a");
  ASSERT_EQ(invoke(cmd_run, m).code, kExitOk);
  RunManifest again = m;
  again.out_dir = fresh_dir("run_b");
  ASSERT_EQ(invoke(cmd_run, again).code, kExitOk);
  for (const char* f : {"trajectory.csv", "events.json", "summary.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(m.out_dir / f)) << f;
  }
  EXPECT_EQ(slurp(m.out_dir / "events.json"), slurp(again.out_dir / "events.json"));
  EXPECT_EQ(slurp(m.out_dir / "summary.json"), slurp(again.out_dir / "summary.json"));
  EXPECT_EQ(slurp(m.out_dir / "trajectory.csv"), slurp(again.out_dir / "trajectory.csv"));

  const auto events = nlohmann::json::parse(slurp(m.out_dir / "events.json"));
  ASSERT_EQ(events["events"].size(), 1u);
  EXPECT_EQ(events["events"][0]["rng_draws"].size(), 2u);
  const auto csv = slurp(m.out_dir / "trajectory.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,phase,term,label,square_modulus,current,phantom");
}

TEST(CmdRun, TrajectoryFloatsRoundTrip) {
  RunManifest m;
  m.config_path = config("observation_overlap");
  m.out_dir = fresh_dir("roundtrip");
  ASSERT_EQ(invoke(cmd_run, m).code, kExitOk);
  std::istringstream csv(slurp(m.out_dir / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  std::getline(csv, line);
  const std::string t = line.substr(0, line.find(','));
  EXPECT_EQ(std::stod(t), 0.0);
}

TEST(CmdRun, RefusesNonEmptyOutputWithoutOverwrite) {
  RunManifest m;
  m.config_path = config("interaction");
  m.out_dir = fresh_dir("nonempty");
  ASSERT_EQ(invoke(cmd_run, m).code, kExitOk);
  const auto second = invoke(cmd_run, m);
  EXPECT_EQ(second.code, kExitConfig);
  EXPECT_NE(second.err.find("--overwrite"), std::string::npos);
  m.overwrite = true;
  EXPECT_EQ(invoke(cmd_run, m).code, kExitOk);
}

TEST(CmdRun, MalformedKeyExitsOneNamingTheKey) {
  const fs::path dir = fresh_dir("badkey");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.yaml") << "scenario: interaction\ngrid: {n_pointz: 10}\n";
  RunManifest m;
  m.config_path = dir / "bad.yaml";
  const auto r = invoke(cmd_run, m);
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("grid.n_pointz"), std::string::npos);
}

TEST(CmdRun, GuardOffDriftExitsTwoNamingRule4) {
  RunManifest m;
  m.config_path = config("pulse_drift_intra_ready");
  m.guard = false;
  const auto r = invoke(cmd_run, m);
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("Rule4Violation"), std::string::npos);
}

TEST(CmdMontecarlo, TurnOffSymmetricPasses) {
  RunManifest m;
  m.config_path = config("turn_off_overlap");
  m.trials = 20000;
  m.out_dir = fresh_dir("mc_turnoff");
  const auto r = invoke(cmd_montecarlo, m);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(slurp(m.out_dir / "report.json"));
  bool found = false;
  for (const auto& c : report["comparisons"]) {
    if (c["name"] == "p2_after_off") {
      found = true;
      EXPECT_NEAR(c["closed_form"].get<double>(), 0.5, 1e-12);
      EXPECT_TRUE(c["pass"].get<bool>());
    }
  }
  EXPECT_TRUE(found);
}

TEST(CmdMontecarlo, PartialInteractionPasses) {
  RunManifest m;
  m.config_path = config("interaction_partial");
  m.trials = 40000;
  EXPECT_EQ(invoke(cmd_montecarlo, m).code, kExitOk);
}

TEST(CmdMontecarlo, BiasedSiteSelectionExitsThree) {
  RunManifest m;
  m.config_path = config("interaction");
  m.trials = 20000;
  m.test_site_bias = 3.0;
  const auto r = invoke(cmd_montecarlo, m);
  EXPECT_EQ(r.code, kExitStatistics);
  EXPECT_NE(r.err.find("site_histogram"), std::string::npos);
}

TEST(CmdMontecarlo, TooFewTrialsIsAConfigError) {
  RunManifest m;
  m.config_path = config("interaction");
  m.trials = 10;
  EXPECT_EQ(invoke(cmd_montecarlo, m).code, kExitConfig);
}

TEST(CmdVerify, BundledConfigsPass) {
  RunManifest m;
  m.out_dir = fresh_dir("verify");
  const auto r = invoke(cmd_verify, m);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(slurp(m.out_dir / "verify.json"));
  EXPECT_TRUE(report["pass"].get<bool>());
  for (const char* name : {"pulse_normalization", "norm_conservation", "phantom_freeze", "rule4_guard",
                           "reduction_zeroing", "determinism"}) {
    EXPECT_TRUE(report["invariants"][name].get<bool>()) << name;
  }
}

TEST(CmdVerify, CoarseGridSurfacesGridTooCoarse) {
  const fs::path dir = fresh_dir("coarse");
  fs::create_directories(dir);
  std::ofstream(dir / "coarse.yaml") << "scenario: interaction\npulses:\n  ready_1: {center: 0.6, sigma: 0.003}\n";
  RunManifest m;
  m.config_path = dir / "coarse.yaml";
  const auto r = invoke(cmd_verify, m);
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("GridTooCoarse"), std::string::npos);
}

TEST(CmdVerify, TamperedPhantomNamesPhantomFreeze) {
  RunManifest m;
  m.test_tamper_phantom = true;
  const auto r = invoke(cmd_verify, m);
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("phantom_freeze"), std::string::npos);
}

}  // namespace
}  // namespace pulsered::cli
