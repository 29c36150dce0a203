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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pulsered/config.hpp"
#include "pulsered/currents.hpp"
#include "pulsered/dynamics.hpp"
#include "pulsered/reduction.hpp"
#include "pulsered/scenarios.hpp"
#include "pulsered/schedule.hpp"

namespace {

using namespace pulsered;

SystemState interaction_state(std::size_t n_points) {
  const BrainGrid grid(n_points, 1.0 / static_cast<double>(n_points));
  const ObserverId observer{1};
  std::vector<Term> terms;
  terms.push_back(Term{1, {1.0, 0.0}, BrainFactor(make_gaussian_pulse(grid, 0.3, 0.05, BrainKind::Conscious), observer)});
  terms.push_back(Term{2, {0.0, 0.0}, BrainFactor(make_gaussian_pulse(grid, 0.6, 0.05, BrainKind::Conscious), observer)});
  return make_state(grid, std::move(terms));
}

EnvelopeSchedule trig_ramp(const SystemState& s) {
  const TransferSpec spec{0, 1, 1.0};
  return EnvelopeSchedule::ramp(RampKind::TrigRamp, 0.0, 1.0, {&spec, 1}, s);
}

// State partway up the ramp.
SystemState mid_ramp(const EnvelopeSchedule& sched, SystemState s) {
  while (s.time < 0.4) s = step(s, sched, 0.002).state;
  return s;
}

void BM_Step(benchmark::State& bench) {
  const SystemState start = interaction_state(static_cast<std::size_t>(bench.range(0)));
  const auto sched = trig_ramp(start);
  const SystemState s = mid_ramp(sched, start);
  for (auto _ : bench) benchmark::DoNotOptimize(step(s, sched, 0.002));
}
BENCHMARK(BM_Step)->Arg(256)->Arg(1024)->Arg(4096);

void BM_SampleHit(benchmark::State& bench) {
  const SystemState start = interaction_state(static_cast<std::size_t>(bench.range(0)));
  const auto sched = trig_ramp(start);
  const auto r = step(mid_ramp(sched, start), sched, 0.002);
  SystemState after = r.state;
  after.hit_mass = 1.0;
  RngStream rng(7);
  for (auto _ : bench) benchmark::DoNotOptimize(sample_hit(after, r.report, 0.002, rng));
}
BENCHMARK(BM_SampleHit)->Arg(256)->Arg(1024)->Arg(4096);

void BM_Reduce(benchmark::State& bench) {
  const SystemState start = interaction_state(static_cast<std::size_t>(bench.range(0)));
  const auto sched = trig_ramp(start);
  const auto r = step(mid_ramp(sched, start), sched, 0.002);
  const std::size_t site = r.state.grid.size() * 6 / 10;
  for (auto _ : bench) benchmark::DoNotOptimize(reduce(r.state, 1, site));
}
BENCHMARK(BM_Reduce)->Arg(256)->Arg(1024)->Arg(4096);

void BM_MonteCarloTrial(benchmark::State& bench, const std::string& name) {
  const PreparedScenario prepared(load_config(std::string(PULSERED_CONFIG_DIR) + "/" + name + ".yaml"));
  RunOptions options;
  options.record_trajectory = false;
  std::uint64_t trial = 0;
  for (auto _ : bench) benchmark::DoNotOptimize(prepared.run_trial(trial++, options));
}
BENCHMARK_CAPTURE(BM_MonteCarloTrial, interaction, std::string("interaction"));
BENCHMARK_CAPTURE(BM_MonteCarloTrial, observation_overlap, std::string("observation_overlap"));
BENCHMARK_CAPTURE(BM_MonteCarloTrial, turn_off_overlap, std::string("turn_off_overlap"));

}  // namespace

BENCHMARK_MAIN();
