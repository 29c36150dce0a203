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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pulsered/config.hpp"
#include "pulsered/currents.hpp"
#include "pulsered/invariants.hpp"
#include "pulsered/reduction.hpp"
#include "pulsered/state.hpp"

namespace pulsered {

struct RunOptions {
  SamplerOptions sampler;
  /// Test hook: rotates the phase of one phantom coefficient mid-run.
  bool tamper_phantom = false;
  bool record_trajectory = true;
  InvariantMonitor* monitor = nullptr;
};

struct TermSample {
  std::size_t label = 0;
  double square_modulus = 0.0;
  double current = 0.0;
  bool phantom = false;
};

struct TrajectorySample {
  double t = 0.0;
  std::string phase;
  std::vector<TermSample> terms;
};

struct InteractionSummary {
  bool hit = false;
  double t_sc = 0.0;
  std::size_t u_sc = 0;
  double s = 1.0;
  double a2_final_sq = 0.0;
  double closed_form_p_hit = 0.0;
  Amplitude post_coefficient{0.0, 0.0};
  Amplitude expected_coefficient{0.0, 0.0};  // a2(t_sc) F2(u_sc) sqrt(du), recomputed
  double formed_norm = 0.0;
  std::size_t formed_center = 0;
};

struct ObservationSummary {
  bool hit = false;
  double t_sc = 0.0;
  std::size_t u_sc = 0;
  double s = 1.0;
  std::size_t multiplicity = 0;  // distinct surviving apparatus labels
  std::vector<LabelCoefficient> survivors;
  double provenance_error = 0.0;   // max |c_i - a_i(t_sc) F_i(u_sc) sqrt(du)|
  double site_probability = 0.0;  // chance of u_sc given a hit in that step
  double ready_fraction = 0.0;    // ready-row square modulus at t_sc over its final value
  double final_probability = 0.0;
  double closed_form_final_probability = 0.0;  // (|a1|^2 + |a2|^2) / s
};

struct TurnOffSummary {
  ObservationSummary observation;
  double t_off = 0.0;
  double p_remain = 0.0;
  bool spot_remains = false;
  double closed_form_p2 = 0.0;
};

struct DisengageSummary {
  ObservationSummary observation;
  double t_dis = 0.0;
  std::vector<LabelCoefficient> before;
  std::vector<LabelCoefficient> after;
  bool coefficients_frozen = false;
  double brain_norm_before = 0.0;
  double brain_norm_after = 0.0;
  double max_hold_change = 0.0;
};

struct DriftSummary {
  double velocity = 0.0;
  std::size_t steps = 0;
  std::size_t start_center = 0;
  std::size_t end_center = 0;
  std::size_t phantom_sites = 0;
  std::size_t live_ready_sites = 0;
  double max_phantom_drift = 0.0;
  std::size_t rule4_rejected = 0;
  std::size_t rule4_executed = 0;
};

struct FormationSample {
  double t = 0.0;
  std::size_t occupied = 0;
  double norm = 0.0;
  double sigma = 0.0;
  double stage = 0.0;
};

struct FadeInSummary {
  InteractionSummary interaction;
  std::vector<FormationSample> samples;
  double target_sigma = 0.0;
  double final_sigma = 0.0;
  double width_error = 0.0;  // |final_sigma / target_sigma - 1|
  bool fully_formed = false;
};

using ScenarioSummary = std::variant<InteractionSummary, ObservationSummary, TurnOffSummary,
                                     DisengageSummary, DriftSummary, FadeInSummary>;

struct ScenarioRun {
  ScenarioName name = ScenarioName::Interaction;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<TrajectorySample> trajectory;
  std::vector<ReductionEvent> events;
  ScenarioSummary summary;
  SystemState final_state;
};

/// The deterministic part of a scenario: initial state, schedule and the
/// pre-hit trajectory, which every trial shares until its stochastic choice.
class PreparedScenario {
 public:
  /// Validates cfg and precomputes the pre-hit track. Throws on config or
  /// dynamics errors.
  explicit PreparedScenario(ScenarioConfig cfg);

  const ScenarioConfig& config() const noexcept { return cfg_; }

  /// One trajectory with its own RNG stream derived from (seed, trial).
  ScenarioRun run_trial(std::uint64_t trial, const RunOptions& options = {}) const;

  /// Square modulus carried into ready components by the end of the ramp.
  double ready_final_square_modulus() const noexcept { return ready_final_; }

  /// Expected u_sc distribution given a hit, from the ramp's per-site currents.
  std::vector<double> expected_site_distribution() const;

  double s() const noexcept { return initial_.s; }

 private:
  struct TrackStep {
    SystemState state;
    CurrentReport report;
  };

  ScenarioRun run_drift(std::uint64_t trial, const RunOptions& options) const;

  ScenarioConfig cfg_;
  SystemState initial_;
  std::optional<EnvelopeSchedule> schedule_;
  std::vector<TrackStep> track_;
  std::vector<std::size_t> ready_terms_;
  double ready_final_ = 0.0;
};

/// Runs trial 0 of the configured scenario.
ScenarioRun run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

}  // namespace pulsered
