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

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "pulsered/config.hpp"
#include "pulsered/invariants.hpp"
#include "pulsered/montecarlo.hpp"
#include "pulsered/scenarios.hpp"

namespace pulsered::cli {

using Json = nlohmann::ordered_json;

Json to_json(const ScenarioConfig& cfg);
Json to_json(const ReductionEvent& event);
Json to_json(const ScenarioSummary& summary);
Json to_json(const ProbabilityReport& report);
Json to_json(const HitHistogram& histogram);
Json to_json(const MonteCarloResult& result);
Json to_json(const std::vector<InvariantCheck>& checks);

Json events_json(const ScenarioRun& run);

/// Long-format trajectory: one row per (sample, term).
/// Columns: t,phase,term,label,square_modulus,current,phantom
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory);

}  // namespace pulsered::cli
