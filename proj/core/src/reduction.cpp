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

#include "pulsered/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pulsered/error.hpp"

namespace pulsered {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool is_target(const Term& term) { return !term.phantom && term.brain.is_ready(); }

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RngStream RngStream::for_trial(std::uint64_t seed, std::uint64_t trial) {
  return RngStream(splitmix64(seed ^ splitmix64(trial + 0x632BE59BD9B4E019ULL)));
}

double RngStream::uniform() {
  ++counter_;
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double hit_probability(const CurrentReport& report, double s, double dt) {
  if (!(s > 0.0)) throw Error(Errc::NonpositiveS, "s must be positive");
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  return std::clamp(report.total_positive * dt / s, 0.0, 1.0);
}

double conditional_hit_probability(const SystemState& after_step, const CurrentReport& report,
                                   double dt) {
  const double p = hit_probability(report, after_step.s, dt);
  if (p == 0.0) return 0.0;
  const double survival = 1.0 - (after_step.hit_mass - p);
  // The last sliver of a completed transfer must fire with certainty.
  if (survival - p <= kHitMassSlack) return 1.0;
  return p / survival;
}

std::optional<HitChoice> sample_hit(const SystemState& state, const CurrentReport& report, double dt,
                                    RngStream& rng, const SamplerOptions& options) {
  const double p_step = hit_probability(report, state.s, dt);
  if (p_step == 0.0) return std::nullopt;
  if (p_step >= kMaxStepHitProbability) {
    std::ostringstream msg;
    msg << "per-step hit probability " << p_step << " >= " << kMaxStepHitProbability
        << "; reduce dt";
    throw Error(Errc::StepTooCoarse, msg.str());
  }

  const double p = conditional_hit_probability(state, report, dt);
  const double hit_draw = rng.uniform();
  if (!(hit_draw < p)) return std::nullopt;

  std::vector<double> cumulative;
  cumulative.reserve(report.per_site.size());
  double total = 0.0;
  const double n_sites = static_cast<double>(state.grid.size());
  for (const auto& sc : report.per_site) {
    double w = 0.0;
    if (sc.current > 0.0 && sc.term < state.terms.size() && is_target(state.terms[sc.term])) {
      w = sc.current;
      if (options.site_bias != 0.0) {
        w *= std::exp(options.site_bias * static_cast<double>(sc.site) / n_sites);
      }
    }
    total += w;
    cumulative.push_back(total);
  }
  const double site_draw = rng.uniform();
  if (!(total > 0.0)) return std::nullopt;  // current flowed only into non-targets

  const double target = site_draw * total;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) it = std::prev(cumulative.end());
  auto index = static_cast<std::size_t>(it - cumulative.begin());
  // Skip zero-width entries that upper_bound can land on at the boundaries.
  while (index > 0 && cumulative[index] == cumulative[index - 1]) --index;
  const double weight = cumulative[index] - (index > 0 ? cumulative[index - 1] : 0.0);

  const auto& sc = report.per_site[index];
  return HitChoice{sc.term, sc.site, hit_draw, site_draw, weight / total, rng.counter()};
}

SystemState reduce(const SystemState& state, std::size_t term_hit, std::size_t u_sc) {
  if (term_hit >= state.terms.size()) {
    throw Error(Errc::IndexOutOfRange, "hit term " + std::to_string(term_hit) + " does not exist");
  }
  if (u_sc >= state.grid.size()) {
    throw Error(Errc::IndexOutOfRange, "site " + std::to_string(u_sc) + " outside grid");
  }
  const Term& hit = state.terms[term_hit];
  if (!is_target(hit)) {
    throw Error(Errc::InvalidHitTarget, "term " + std::to_string(term_hit) +
                                            " is not a live ready component");
  }
  if (hit.brain.site_amplitude(u_sc) == Amplitude{0.0, 0.0}) {
    throw Error(Errc::ZeroWeightSite, "F(" + std::to_string(u_sc) + ") = 0 in term " +
                                          std::to_string(term_hit));
  }

  const ObserverId observer = hit.brain.observer();
  SystemState next = state;
  for (std::size_t n = 0; n < next.terms.size(); ++n) {
    Term& term = next.terms[n];
    const bool candidate = is_target(state.terms[n]) && term.brain.observer() == observer;
    const Amplitude weight = candidate ? term.brain.site_amplitude(u_sc) : Amplitude{0.0, 0.0};
    term.inflow = 0.0;
    term.peak_inflow = 0.0;
    if (weight == Amplitude{0.0, 0.0}) {
      term.coefficient = {0.0, 0.0};
      continue;
    }
    term.coefficient = state.terms[n].coefficient * weight;
    term.brain = BrainFactor(SingleState{BrainKind::Conscious, u_sc}, observer);
  }
  next.hit_mass = 0.0;
  return next;
}

ReductionEvent describe_reduction(const SystemState& pre, const SystemState& post,
                                  const HitChoice& hit, std::uint64_t trial) {
  ReductionEvent ev;
  ev.t_sc = pre.time;
  ev.term_hit = hit.term;
  ev.u_sc = hit.site;
  ev.pre_norm = total_square_modulus(pre);
  ev.post_norm = total_square_modulus(post);
  for (std::size_t n = 0; n < post.terms.size(); ++n) {
    const auto& term = post.terms[n];
    if (term.coefficient == Amplitude{0.0, 0.0}) continue;
    ev.post_coefficients.push_back({term.apparatus_label, n, term.coefficient});
  }
  ev.rng_draws = {hit.hit_draw, hit.site_draw};
  ev.rng_counter = hit.counter;
  ev.site_probability = hit.site_probability;
  ev.trial = trial;
  return ev;
}

std::vector<Rule4Finding> guard_rule4(const EnvelopeSchedule& schedule, const SystemState& state) {
  std::vector<Rule4Finding> findings;
  const auto& transfers = schedule.transfers();
  for (std::size_t i = 0; i < transfers.size(); ++i) {
    const auto& tr = transfers[i];
    if (tr.source >= state.terms.size() || tr.destination >= state.terms.size()) continue;
    const auto& src = state.terms[tr.source].brain;
    const auto& dst = state.terms[tr.destination].brain;
    if (src.is_ready() && dst.is_ready() && src.observer() == dst.observer()) {
      findings.push_back({i, tr.source, tr.destination, src.observer()});
    }
  }
  return findings;
}

}  // namespace pulsered
