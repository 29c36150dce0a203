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
#include <vector>

#include "pulsered/state.hpp"

namespace pulsered {

struct SiteCurrent {
  std::size_t term = 0;
  std::size_t site = 0;
  double current = 0.0;
};

/// Probability currents over one step, as finite differences of square moduli.
struct CurrentReport {
  std::vector<double> per_term;       // J_n for every term of the later state
  std::vector<SiteCurrent> per_site;  // ready factors only, sites with support
  double total_positive = 0.0;        // sum of positive J_n

  double net() const noexcept;
};

/// Currents between two snapshots of the same trajectory. Terms present in
/// `after` but not in `before` are treated as having started from zero.
CurrentReport measure_currents(const SystemState& before, const SystemState& after, double dt);

}  // namespace pulsered
