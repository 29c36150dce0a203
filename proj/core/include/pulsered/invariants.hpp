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
#include <string>
#include <vector>

#include "pulsered/currents.hpp"
#include "pulsered/state.hpp"

namespace pulsered {

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kConservationPerTime = 1e-9;
inline constexpr double kCurrentTolerance = 1e-9;
inline constexpr double kProvenanceTolerance = 1e-12;

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::size_t evaluations = 0;
  double worst = 0.0;  // largest observed deviation
  std::string detail{};  // first failure
};

/// Watches a trajectory and records every invariant breach by name:
/// pulse_normalization, norm_conservation, current_antisymmetry,
/// rule2_ready_tagging, phantom_freeze, reduction_zeroing,
/// coefficient_provenance, rule4_guard, determinism.
class InvariantMonitor {
 public:
  InvariantMonitor();

  void on_step(const SystemState& before, const SystemState& after, const CurrentReport& report);
  void on_reduction(const SystemState& pre, const SystemState& post, std::size_t u_sc);
  void on_rule4(std::size_t rejected, std::size_t executed);
  void on_determinism(bool identical, const std::string& detail);

  /// Pulse norms of a state observed outside a step (formation, swaps).
  void on_snapshot(const SystemState& state);

  const std::vector<InvariantCheck>& checks() const noexcept { return checks_; }
  bool passed() const noexcept;
  const InvariantCheck* first_failure() const noexcept;

 private:
  InvariantCheck& check(const std::string& name);
  void record(const std::string& name, bool ok, double deviation, const std::string& detail);
  void check_pulses(const SystemState& state);

  std::vector<InvariantCheck> checks_;
};

}  // namespace pulsered
