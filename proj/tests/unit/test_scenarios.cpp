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

#include <cmath>
#include <string>

#include "pulsered/config.hpp"
#include "pulsered/error.hpp"
#include "pulsered/invariants.hpp"
#include "pulsered/montecarlo.hpp"
#include "pulsered/scenarios.hpp"

namespace pulsered {
namespace {

ScenarioConfig bundled(const std::string& name) {
  return load_config(std::string(PULSERED_CONFIG_DIR) + "/" + name + ".yaml");
}

ScenarioRun monitored(const ScenarioConfig& cfg, InvariantMonitor& monitor, std::uint64_t trial = 0) {
  RunOptions options;
  options.monitor = &monitor;
  return PreparedScenario(cfg).run_trial(trial, options);
}

TEST(Interaction, FullRampAlwaysReducesIntoUnitPulse) {
  const auto cfg = bundled("interaction");
  const PreparedScenario prepared(cfg);
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    InvariantMonitor monitor;
    RunOptions options;
    options.monitor = &monitor;
    const auto run = prepared.run_trial(trial, options);
    ASSERT_EQ(run.events.size(), 1u);
    const auto& sum = std::get<InteractionSummary>(run.summary);
    ASSERT_TRUE(sum.hit);
    ASSERT_NEAR(std::abs(sum.post_coefficient - sum.expected_coefficient), 0.0, 1e-12);
    ASSERT_NEAR(sum.formed_norm, 1.0, 1e-9);
    ASSERT_EQ(sum.formed_center, sum.u_sc);
    ASSERT_TRUE(monitor.passed()) << monitor.first_failure()->name;
  }
}

TEST(Interaction, PartialRampClosedForm) {
  auto cfg = bundled("interaction_partial");
  const PreparedScenario prepared(cfg);
  EXPECT_NEAR(prepared.ready_final_square_modulus(), 0.3, 1e-12);
  const auto run = prepared.run_trial(0);
  EXPECT_NEAR(std::get<InteractionSummary>(run.summary).closed_form_p_hit, 0.3, 1e-12);
}

TEST(Observation, DisjointAlwaysSingleLabel) {
  const PreparedScenario prepared(bundled("observation_disjoint"));
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    const auto run = prepared.run_trial(trial, RunOptions{{}, false, false, nullptr});
    ASSERT_EQ(std::get<ObservationSummary>(run.summary).multiplicity, 1u);
  }
}

TEST(Observation, OverlapProducesBothLabelsWithProvenance) {
  const PreparedScenario prepared(bundled("observation_overlap"));
  bool saw_two = false;
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    const auto run = prepared.run_trial(trial, RunOptions{{}, false, false, nullptr});
    const auto& obs = std::get<ObservationSummary>(run.summary);
    ASSERT_LE(obs.provenance_error, 1e-12);
    ASSERT_NEAR(obs.final_probability, obs.closed_form_final_probability, 1e-9);
    saw_two = saw_two || obs.multiplicity == 2;
  }
  EXPECT_TRUE(saw_two);
}

TEST(Observation, SingleStateXNeverSuperposes) {
  const PreparedScenario prepared(bundled("observation_single_x"));
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    const auto run = prepared.run_trial(trial, RunOptions{{}, false, false, nullptr});
    ASSERT_EQ(run.events.front().post_coefficients.size(), 1u);
  }
}

TEST(TurnOff, ZeroSecondAmplitudeNeverRemains) {
  auto cfg = bundled("turn_off_overlap");
  cfg.a1 = 1.0;
  cfg.a2 = 0.0;
  const PreparedScenario prepared(cfg);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto off = std::get<TurnOffSummary>(prepared.run_trial(trial).summary);
    ASSERT_EQ(off.p_remain, 0.0);
    ASSERT_FALSE(off.spot_remains);
    ASSERT_EQ(off.closed_form_p2, 0.0);
  }
}

TEST(Disengage, BracketFrozenAndNormKept) {
  InvariantMonitor monitor;
  const auto run = monitored(bundled("disengage"), monitor);
  const auto& dis = std::get<DisengageSummary>(run.summary);
  EXPECT_TRUE(dis.coefficients_frozen);
  EXPECT_EQ(dis.before, dis.after);
  EXPECT_EQ(dis.max_hold_change, 0.0);
  EXPECT_NEAR(dis.brain_norm_before, 1.0, 1e-9);
  EXPECT_NEAR(dis.brain_norm_after, 1.0, 1e-9);
  EXPECT_TRUE(monitor.passed());
}

TEST(PulseDrift, ZeroVelocityHasNoTrail) {
  auto cfg = bundled("pulse_drift");
  cfg.drift_velocity = 0.0;
  const auto sum = std::get<DriftSummary>(run_scenario(cfg).summary);
  EXPECT_EQ(sum.phantom_sites, 0u);
  EXPECT_EQ(sum.start_center, sum.end_center);
}

TEST(PulseDrift, TraverseLeavesFrozenTrail) {
  InvariantMonitor monitor;
  const auto run = monitored(bundled("pulse_drift"), monitor);
  const auto& sum = std::get<DriftSummary>(run.summary);
  EXPECT_EQ(sum.end_center - sum.start_center, 50u);
  EXPECT_GE(sum.phantom_sites, 1u);
  EXPECT_LT(sum.max_phantom_drift, 1e-12);
  EXPECT_TRUE(monitor.passed());
}

TEST(PulseDrift, GuardRejectsIntraReadyTransfers) {
  InvariantMonitor monitor;
  const auto run = monitored(bundled("pulse_drift_intra_ready"), monitor);
  const auto& sum = std::get<DriftSummary>(run.summary);
  EXPECT_GT(sum.rule4_rejected, 0u);
  EXPECT_EQ(sum.rule4_executed, 0u);
  EXPECT_TRUE(monitor.passed());
}

TEST(PulseDrift, GuardOffAbortsWithRule4Violation) {
  auto cfg = bundled("pulse_drift_intra_ready");
  cfg.guard = false;
  try {
    run_scenario(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Rule4Violation);
  }
}

TEST(PulseDrift, TamperedPhantomIsCaught) {
  InvariantMonitor monitor;
  RunOptions options;
  options.monitor = &monitor;
  options.tamper_phantom = true;
  run_scenario(bundled("pulse_drift"), options);
  ASSERT_FALSE(monitor.passed());
  EXPECT_EQ(monitor.first_failure()->name, "phantom_freeze");
}

TEST(FadeIn, ThreeStageProgression) {
  InvariantMonitor monitor;
  const auto run = monitored(bundled("fade_in"), monitor);
  const auto& fade = std::get<FadeInSummary>(run.summary);
  ASSERT_FALSE(fade.samples.empty());
  EXPECT_EQ(fade.samples.front().occupied, 1u);
  bool partial = false;
  for (const auto& s : fade.samples) {
    EXPECT_NEAR(s.norm, 1.0, 1e-9);
    partial = partial || (s.occupied > 1 && s.occupied < fade.samples.back().occupied);
  }
  EXPECT_TRUE(partial);
  EXPECT_TRUE(fade.fully_formed);
  EXPECT_LT(fade.width_error, 0.02);
  EXPECT_TRUE(monitor.passed());
}

TEST(Scenarios, SummariesArePureFunctionsOfConfigAndSeed) {
  for (const char* name : {"interaction", "observation_overlap", "turn_off_overlap"}) {
    const auto cfg = bundled(name);
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    EXPECT_EQ(a.events, b.events) << name;
    auto other = cfg;
    other.seed += 1;
    EXPECT_NE(a.events, run_scenario(other).events) << name;
  }
}

TEST(MonteCarlo, IndependentOfWorkerCount) {
  const auto cfg = bundled("turn_off_overlap");
  const auto one = run_montecarlo(cfg, 2000, {}, 1);
  const auto three = run_montecarlo(cfg, 2000, {}, 3);
  EXPECT_EQ(one.events, three.events);
  EXPECT_EQ(one.find("p2_after_off")->report.empirical, three.find("p2_after_off")->report.empirical);
}

TEST(MonteCarlo, RejectsUnsupportedScenariosAndTooFewTrials) {
  try {
    run_montecarlo(bundled("pulse_drift"), 2000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConfigError);
  }
  try {
    run_montecarlo(bundled("interaction"), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooFewTrials);
  }
}

TEST(InvariantMonitor, FlagsNormDriftAndNamesIt) {
  InvariantMonitor monitor;
  auto cfg = bundled("interaction");
  const PreparedScenario prepared(cfg);
  auto run = prepared.run_trial(0);
  SystemState before = run.final_state;
  SystemState after = before;
  after.time += cfg.dt;
  after.terms[1].coefficient *= 1.001;
  monitor.on_step(before, after, CurrentReport{std::vector<double>(after.terms.size(), 0.0), {}, 0.0});
  ASSERT_FALSE(monitor.passed());
  EXPECT_EQ(monitor.first_failure()->name, "norm_conservation");
}

}  // namespace
}  // namespace pulsered
