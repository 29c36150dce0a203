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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pulsered/currents.hpp"
#include "pulsered/schedule.hpp"
#include "pulsered/state.hpp"

namespace pulsered {

/// Per-step unconditional hit probability allowed before the step size is
/// rejected as too coarse.
inline constexpr double kMaxStepHitProbability = 0.05;

/// Remaining hit mass below which the current step fires with certainty.
inline constexpr double kHitMassSlack = 1e-12;

/// Replayable uniform stream. Draws are 53-bit doubles in [0, 1) taken from a
/// mt19937_64 engine, so a (seed, counter) pair pins every value bit-exactly.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Independent stream for one Monte Carlo trial.
  static RngStream for_trial(std::uint64_t seed, std::uint64_t trial);

  double uniform();
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::mt19937_64 engine_;
};

/// clamp(sum of positive J_n * dt / s, 0, 1): the probability mass of a
/// stochastic choice falling inside this step. Throws NonpositiveS.
double hit_probability(const CurrentReport& report, double s, double dt);

/// Probability of a hit in the latest step given that none happened before.
/// `after_step` must be the state produced by the step that produced `report`.
double conditional_hit_probability(const SystemState& after_step, const CurrentReport& report,
                                   double dt);

struct HitChoice {
  std::size_t term = 0;
  std::size_t site = 0;
  double hit_draw = 0.0;
  double site_draw = 0.0;
  double site_probability = 0.0;  // chance of this (term, site) given a hit
  std::uint64_t counter = 0;      // stream position after the draws
};

struct SamplerOptions {
  /// Test hook: tilts site selection by exp(site_bias * u / n). Zero in production.
  double site_bias = 0.0;
};

/// Rule (1) hit test followed by a site choice weighted by positive per-site
/// current. Phantom terms and conscious factors are never targets. Throws
/// StepTooCoarse when the step's unconditional hit probability reaches
/// kMaxStepHitProbability.
std::optional<HitChoice> sample_hit(const SystemState& state, const CurrentReport& report, double dt,
                                    RngStream& rng, const SamplerOptions& options = {});

/// Rule (3) reduction at site u_sc of the ready factor in term_hit.
///
/// Every ready term of the same observer that has support at u_sc keeps the
/// coefficient a_i * F_i(u_sc) sqrt(du) and collapses to the conscious single
/// state at u_sc. All other coefficients become exactly zero. s is untouched
/// and nothing is renormalized.
SystemState reduce(const SystemState& state, std::size_t term_hit, std::size_t u_sc);

struct LabelCoefficient {
  std::size_t label = 0;
  std::size_t term = 0;
  Amplitude coefficient{0.0, 0.0};
  bool operator==(const LabelCoefficient&) const = default;
};

struct ReductionEvent {
  double t_sc = 0.0;
  std::size_t term_hit = 0;
  std::size_t u_sc = 0;
  double pre_norm = 0.0;
  double post_norm = 0.0;
  std::vector<LabelCoefficient> post_coefficients;  // nonzero survivors only
  std::array<double, 2> rng_draws{};                 // hit test, site selection
  std::uint64_t rng_counter = 0;
  double site_probability = 0.0;
  std::uint64_t trial = 0;

  bool operator==(const ReductionEvent&) const = default;
};

ReductionEvent describe_reduction(const SystemState& pre, const SystemState& post,
                                  const HitChoice& hit, std::uint64_t trial);

struct Rule4Finding {
  std::size_t transfer = 0;
  std::size_t source = 0;
  std::size_t destination = 0;
  ObserverId observer{};
};

/// Every transfer whose endpoints both hold ready factors of one observer.
std::vector<Rule4Finding> guard_rule4(const EnvelopeSchedule& schedule, const SystemState& state);

}  // namespace pulsered
