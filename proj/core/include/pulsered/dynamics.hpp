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

#include "pulsered/currents.hpp"
#include "pulsered/schedule.hpp"
#include "pulsered/state.hpp"

namespace pulsered {

/// A ready term whose incoming current falls below this after having
/// exceeded it becomes a phantom.
inline constexpr double kPhantomThreshold = 1e-12;

/// Staged formation snaps to the final profile after this many time constants.
inline constexpr double kFormationCompleteTaus = 30.0;

struct StepResult {
  SystemState state;
  CurrentReport report;
};

/// Advances coefficients along `schedule` by dt and reports the currents.
///
/// Newly fed components are tagged Ready; forming pulses widen; ready terms
/// whose inflow stops are frozen as phantoms. Throws ResolutionTooCoarse when
/// dt exceeds 1/100 of an active ramp, PhantomTransfer when an active transfer
/// touches a phantom and Rule4Violation when a transfer links two ready
/// factors of the same observer.
StepResult step(const SystemState& state, const EnvelopeSchedule& schedule, double dt);

enum class FormationMode { Instantaneous, Staged };

struct FormationPolicy {
  FormationMode mode = FormationMode::Instantaneous;
  double tau = 0.0;
  double target_sigma = 0.05;
  std::size_t neighbor_radius = 1;

  void validate(const BrainGrid& grid) const;
};

/// Turns the chosen conscious state of a freshly reduced state into a pulse.
/// Staged formations start as the single site and widen on later steps.
SystemState form_pulse(const SystemState& state, std::size_t chosen, const FormationPolicy& policy);

/// Widens a forming pulse to its shape at time t. Only sites within
/// neighbor_radius of the currently occupied range may gain amplitude.
void advance_formation(Pulse& pulse, double t);

struct DriftParams {
  double velocity = 0.0;  // du/dt
  bool shadow_ready = false;
  double feed_rate = 0.0;  // fraction of the conscious square modulus fed per unit time
  std::size_t shadow_label = 2;
};

/// Moves the single conscious pulse by velocity * dt. With shadow_ready the
/// conscious term feeds one ready term per grid site under the pulse; sites
/// whose feed stops turn into frozen phantoms.
SystemState drift_pulse(const SystemState& state, const DriftParams& params, double dt);

/// sum_{u=lo..hi} |F(u)|^2 du.
double relative_intensity(const Pulse& pulse, std::size_t lo, std::size_t hi);

}  // namespace pulsered
