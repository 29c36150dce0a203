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
#include <span>
#include <vector>

#include "pulsered/pulse.hpp"
#include "pulsered/reduction.hpp"

namespace pulsered {

inline constexpr std::size_t kMinTrials = 1000;
inline constexpr std::size_t kMinHistogramEvents = 10000;
inline constexpr double kPassSigmas = 3.0;
inline constexpr double kChiSquarePassP = 0.01;
inline constexpr double kIdentityTolerance = 1e-9;

struct ProbabilityReport {
  double closed_form = 0.0;
  double empirical = 0.0;
  std::size_t n_trials = 0;
  double std_error = 0.0;
  double z_score = 0.0;
  bool pass = false;
};

/// (1/s) * |a2|^2 at the end of the interaction.
double closed_form_p_hit(double a2_final_sq, double s);

/// (1/s) * |a2|^2 for the spot surviving the turn-off.
double closed_form_p2_after_off(double a2_sq, double s);

/// Bernoulli aggregate against a closed form, pass iff |z| < 3. When the
/// empirical standard error vanishes the closed-form variance is used, and
/// when that vanishes too a match within kIdentityTolerance is required.
/// Throws TooFewTrials.
ProbabilityReport compare(std::span<const bool> outcomes, double closed_form);

/// Same test for the mean of real-valued per-trial samples.
ProbabilityReport compare_mean(std::span<const double> samples, double closed_form);

/// z-test for two independent estimates of the same quantity.
ProbabilityReport compare_reports(const ProbabilityReport& a, const ProbabilityReport& b);

struct HitHistogram {
  std::vector<std::size_t> counts;
  std::vector<double> frequency;
  std::vector<double> expected;  // probability per site
  double chi_square = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  bool pass = false;
};

/// Per-site frequencies of u_sc and a chi-square goodness of fit against
/// `expected` (per-site probabilities). Sites whose expected count is below
/// five are pooled into one bin. Throws TooFewEvents below kMinHistogramEvents.
HitHistogram hit_histogram(std::span<const ReductionEvent> events, std::span<const double> expected);

/// Expected site distribution |F|^2 du of a pulse.
std::vector<double> born_profile(const Pulse& pulse);

}  // namespace pulsered
