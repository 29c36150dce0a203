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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pulsered/analysis.hpp"
#include "pulsered/config.hpp"
#include "pulsered/scenarios.hpp"

namespace pulsered {

struct NamedComparison {
  std::string name;
  ProbabilityReport report;
};

struct MonteCarloResult {
  ScenarioName scenario = ScenarioName::Interaction;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  std::vector<NamedComparison> comparisons;
  std::optional<HitHistogram> histogram;  // present when hits >= kMinHistogramEvents
  std::map<std::size_t, std::size_t> multiplicity;  // surviving labels -> trials
  double max_provenance_error = 0.0;
  std::vector<ReductionEvent> events;

  bool pass() const noexcept;
  const NamedComparison* find(const std::string& name) const noexcept;
};

/// Runs `trials` independent trials of a ramp-based scenario on `threads`
/// workers (0 picks the hardware concurrency). Trial i always uses the RNG
/// stream derived from (cfg.seed, i), so results do not depend on the worker
/// count. Throws ConfigError for pulse_drift and fade_in, TooFewTrials below
/// kMinTrials.
MonteCarloResult run_montecarlo(const ScenarioConfig& cfg, std::size_t trials,
                                const SamplerOptions& sampler = {}, unsigned threads = 0);

}  // namespace pulsered
