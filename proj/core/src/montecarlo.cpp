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

#include "pulsered/montecarlo.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "pulsered/error.hpp"

namespace pulsered {

namespace {

struct TrialOutcome {
  bool hit = false;
  std::size_t multiplicity = 0;
  double final_probability = 0.0;
  double provenance_error = 0.0;
  bool spot_remains = false;
  std::optional<ReductionEvent> event;
};

const ObservationSummary* observation_of(const ScenarioSummary& summary) {
  if (const auto* o = std::get_if<ObservationSummary>(&summary)) return o;
  if (const auto* t = std::get_if<TurnOffSummary>(&summary)) return &t->observation;
  if (const auto* d = std::get_if<DisengageSummary>(&summary)) return &d->observation;
  return nullptr;
}

TrialOutcome outcome_of(ScenarioRun&& run) {
  TrialOutcome out;
  if (!run.events.empty()) {
    out.hit = true;
    out.event = std::move(run.events.front());
  }
  if (const auto* obs = observation_of(run.summary)) {
    out.multiplicity = obs->multiplicity;
    out.final_probability = obs->final_probability;
    out.provenance_error = obs->provenance_error;
  }
  if (const auto* off = std::get_if<TurnOffSummary>(&run.summary)) out.spot_remains = off->spot_remains;
  return out;
}

}  // namespace

bool MonteCarloResult::pass() const noexcept {
  const bool comparisons_pass = std::all_of(comparisons.begin(), comparisons.end(),
                                            [](const auto& c) { return c.report.pass; });
  return comparisons_pass && (!histogram || histogram->pass);
}

const NamedComparison* MonteCarloResult::find(const std::string& name) const noexcept {
  for (const auto& c : comparisons) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

MonteCarloResult run_montecarlo(const ScenarioConfig& cfg, std::size_t trials,
                                const SamplerOptions& sampler, unsigned threads) {
  if (cfg.name == ScenarioName::PulseDrift || cfg.name == ScenarioName::FadeIn) {
    throw Error(Errc::ConfigError, std::string("montecarlo does not support scenario ") +
                                       std::string(to_string(cfg.name)));
  }
  if (trials < kMinTrials) {
    throw Error(Errc::TooFewTrials, std::to_string(trials) + " trials, need at least " +
                                        std::to_string(kMinTrials));
  }

  const PreparedScenario prepared(cfg);
  RunOptions options;
  options.sampler = sampler;
  options.record_trajectory = false;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));

  std::vector<TrialOutcome> outcomes(trials);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&](unsigned w) {
    try {
      for (std::size_t i = w; i < trials; i += threads) {
        outcomes[i] = outcome_of(prepared.run_trial(i, options));
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloResult result;
  result.scenario = cfg.name;
  result.seed = cfg.seed;
  result.trials = trials;

  for (auto& o : outcomes) {
    if (!o.hit) continue;
    ++result.hits;
    result.events.push_back(std::move(*o.event));
  }

  auto bernoulli = [](const std::vector<TrialOutcome>& outs, auto pred) {
    auto flags = std::make_unique<bool[]>(outs.size());
    for (std::size_t i = 0; i < outs.size(); ++i) flags[i] = pred(outs[i]);
    return flags;
  };

  const double s = prepared.s();
  {
    auto flags = bernoulli(outcomes, [](const TrialOutcome& o) { return o.hit; });
    result.comparisons.push_back(
        {"p_hit", compare({flags.get(), trials},
                          closed_form_p_hit(prepared.ready_final_square_modulus(), s))});
  }

  const bool observation = cfg.name != ScenarioName::Interaction;
  if (observation) {
    std::vector<double> finals;
    finals.reserve(trials);
    for (const auto& o : outcomes) {
      if (!o.hit) continue;
      finals.push_back(o.final_probability);
      ++result.multiplicity[o.multiplicity];
      result.max_provenance_error = std::max(result.max_provenance_error, o.provenance_error);
    }
    if (finals.size() >= kMinTrials) {
      result.comparisons.push_back(
          {"final_probability", compare_mean(finals, (cfg.a1 * cfg.a1 + cfg.a2 * cfg.a2) / s)});
    }
  }
  if (cfg.name == ScenarioName::TurnOff) {
    auto flags = bernoulli(outcomes, [](const TrialOutcome& o) { return o.spot_remains; });
    result.comparisons.push_back(
        {"p2_after_off", compare({flags.get(), trials}, closed_form_p2_after_off(cfg.a2 * cfg.a2, s))});
  }

  if (result.hits >= kMinHistogramEvents) {
    result.histogram = hit_histogram(result.events, prepared.expected_site_distribution());
  }
  return result;
}

}  // namespace pulsered
