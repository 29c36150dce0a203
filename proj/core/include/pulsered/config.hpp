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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pulsered/dynamics.hpp"
#include "pulsered/grid.hpp"
#include "pulsered/schedule.hpp"

namespace pulsered {

enum class ScenarioName { Interaction, UnresolvableObservation, TurnOff, Disengage, PulseDrift, FadeIn };

std::string_view to_string(ScenarioName name) noexcept;
std::optional<ScenarioName> scenario_from_string(std::string_view text) noexcept;

struct PulseSpec {
  double center = 0.5;
  double sigma = 0.05;
};

struct RampSpec {
  RampKind kind = RampKind::TrigRamp;
  double t_start = 0.0;
  double t_end = 1.0;
  double final_fraction = 1.0;
};

/// Everything a scenario run depends on besides the trial index. The YAML
/// schema is documented in configs/README.md.
struct ScenarioConfig {
  ScenarioName name = ScenarioName::Interaction;
  std::uint64_t seed = 1;
  double dt = 0.002;
  std::uint32_t observer = 1;
  bool guard = true;

  std::size_t grid_points = 256;
  double grid_spacing = 1.0 / 256.0;
  double grid_origin = 0.0;

  double a1 = 1.0;
  double a2 = 0.0;

  PulseSpec conscious{0.3, 0.05};
  PulseSpec ready_1{0.45, 0.05};
  PulseSpec ready_2{0.6, 0.05};

  RampSpec ramp;

  FormationPolicy formation{FormationMode::Instantaneous, 0.0, 0.05, 1};
  std::size_t formation_steps = 0;

  bool single_state_x = false;

  double t_off_delay = 0.01;
  double t_dis_delay = 0.01;
  std::size_t hold_steps = 10;

  double drift_velocity = 0.0;
  std::size_t drift_steps = 50;
  double feed_rate = 1.0;
  bool shadow_ready = true;
  bool intra_ready_transfer = false;

  std::size_t trials = 100000;

  BrainGrid grid() const { return BrainGrid(grid_points, grid_spacing, grid_origin); }

  /// tau falls back to 10 dt when left at zero.
  FormationPolicy formation_policy() const;

  /// Scenario-specific preconditions. Throws ConfigError.
  void validate() const;
};

/// Parses YAML text. Unknown keys and malformed values throw ConfigError
/// naming the dotted key path.
ScenarioConfig parse_config(std::string_view yaml_text);

ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace pulsered
