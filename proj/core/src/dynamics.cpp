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

#include "pulsered/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pulsered/error.hpp"
#include "pulsered/reduction.hpp"

namespace pulsered {

namespace {

void update_phantom(Term& term, double inflow) {
  term.inflow = inflow;
  term.peak_inflow = std::max(term.peak_inflow, inflow);
  if (term.peak_inflow >= kPhantomThreshold && inflow < kPhantomThreshold) term.phantom = true;
}

Amplitude grown_destination(const Transfer& tr, double moved) {
  const double dest_sq = std::norm(tr.destination_initial) + moved;
  if (tr.destination_initial != Amplitude{0.0, 0.0}) {
    return tr.destination_initial / std::abs(tr.destination_initial) * std::sqrt(dest_sq);
  }
  if (tr.source_initial == Amplitude{0.0, 0.0}) return {0.0, 0.0};
  return tr.source_initial / std::abs(tr.source_initial) * std::sqrt(dest_sq);
}

}  // namespace

StepResult step(const SystemState& state, const EnvelopeSchedule& schedule, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  const double t1 = state.time + dt;
  const bool active = schedule.active_over(state.time, t1);

  if (active) {
    const double span = schedule.t_end() - schedule.t_start();
    if (dt > span / 100.0 * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "dt " << dt << " exceeds 1/100 of the ramp span " << span;
      throw Error(Errc::ResolutionTooCoarse, msg.str());
    }
    for (const auto& tr : schedule.transfers()) {
      if (tr.source >= state.terms.size() || tr.destination >= state.terms.size()) {
        throw Error(Errc::IndexOutOfRange, "schedule refers to a missing term");
      }
      if (state.terms[tr.source].phantom || state.terms[tr.destination].phantom) {
        throw Error(Errc::PhantomTransfer, "transfer " + std::to_string(tr.source) + " -> " +
                                               std::to_string(tr.destination) +
                                               " touches a phantom term");
      }
    }
    if (const auto findings = guard_rule4(schedule, state); !findings.empty()) {
      throw Error(Errc::Rule4Violation,
                  "transfer " + std::to_string(findings.front().source) + " -> " +
                      std::to_string(findings.front().destination) +
                      " links two ready states of the same observer");
    }
  }

  StepResult out{state, {}};
  SystemState& next = out.state;
  next.time = t1;

  if (active) {
    for (const auto& tr : schedule.transfers()) {
      const double g = schedule.transferred_fraction(tr, t1);
      const double moved = g * std::norm(tr.source_initial);
      next.terms[tr.source].coefficient = tr.source_initial * std::sqrt(std::max(0.0, 1.0 - g));
      next.terms[tr.destination].coefficient = grown_destination(tr, moved);
      // Rule (2): a component that comes into being holds ready states only.
      if (state.terms[tr.destination].square_modulus() == 0.0 &&
          next.terms[tr.destination].square_modulus() > 0.0) {
        next.terms[tr.destination].brain.set_kind(BrainKind::Ready);
      }
    }
  }

  for (auto& term : next.terms) {
    if (auto* pulse = term.brain.pulse(); pulse && pulse->formation) advance_formation(*pulse, t1);
  }

  out.report = measure_currents(state, next, dt);

  for (std::size_t n = 0; n < next.terms.size(); ++n) {
    Term& term = next.terms[n];
    if (term.phantom || !term.brain.is_ready()) continue;
    update_phantom(term, std::max(0.0, out.report.per_term[n]));
  }

  next.hit_mass += hit_probability(out.report, state.s, dt);
  return out;
}

void FormationPolicy::validate(const BrainGrid& grid) const {
  if (target_sigma < 2.0 * grid.spacing()) {
    throw Error(Errc::GridTooCoarse, "target_sigma below 2*du");
  }
  if (mode == FormationMode::Staged && !(tau > 0.0)) {
    throw Error(Errc::InvalidArgument, "staged formation needs tau > 0");
  }
  if (neighbor_radius < 1) throw Error(Errc::InvalidArgument, "neighbor_radius must be >= 1");
}

SystemState form_pulse(const SystemState& state, std::size_t chosen, const FormationPolicy& policy) {
  policy.validate(state.grid);
  if (chosen >= state.grid.size()) {
    throw Error(Errc::IndexOutOfRange, "chosen site outside grid");
  }

  std::size_t survivors = 0;
  for (const auto& term : state.terms) {
    if (term.coefficient == Amplitude{0.0, 0.0}) continue;
    const auto* single = term.brain.single();
    if (!single || single->kind != BrainKind::Conscious || single->index != chosen) {
      throw Error(Errc::NotPostReduction,
                  "a surviving term does not hold the chosen conscious state " +
                      std::to_string(chosen));
    }
    ++survivors;
  }
  if (survivors == 0) throw Error(Errc::NotPostReduction, "no surviving term");

  Pulse pulse = [&] {
    if (policy.mode == FormationMode::Instantaneous) {
      return make_pulse(state.grid, gaussian_profile(state.grid, state.grid.site(chosen),
                                                     policy.target_sigma),
                        BrainKind::Conscious);
    }
    std::vector<Amplitude> weights(state.grid.size(), Amplitude{0.0, 0.0});
    weights[chosen] = 1.0 / std::sqrt(state.grid.spacing());
    Pulse p{.grid = state.grid, .kind = BrainKind::Conscious, .center_index = chosen, .weights = std::move(weights), .formation_stage = 0.0};
    p.formation = StagedFormation{state.time, policy.tau,    policy.target_sigma,
                                  policy.neighbor_radius, chosen, chosen, chosen};
    return p;
  }();

  SystemState next = state;
  for (auto& term : next.terms) {
    if (term.coefficient == Amplitude{0.0, 0.0}) continue;
    term.brain = BrainFactor(pulse, term.brain.observer());
  }
  return next;
}

void advance_formation(Pulse& pulse, double t) {
  if (!pulse.formation) return;
  auto& f = *pulse.formation;
  const double x = (t - f.t_sc) / f.tau;
  if (x <= 0.0) return;
  const BrainGrid& grid = pulse.grid;
  const double center = grid.site(f.anchor);

  if (x >= kFormationCompleteTaus) {
    pulse.weights = gaussian_profile(grid, center, f.target_sigma);
    pulse.formation_stage = 1.0;
    pulse.formation.reset();
    pulse.center_index = peak_index(pulse.weights);
    return;
  }

  const double decay = std::exp(-x);
  const double sigma = f.target_sigma * (1.0 - decay) + 2.0 * grid.spacing() * decay;
  const std::size_t lo = f.lo >= f.neighbor_radius ? f.lo - f.neighbor_radius : 0;
  const std::size_t hi = std::min(grid.size() - 1, f.hi + f.neighbor_radius);

  auto weights = gaussian_profile(grid, center, sigma);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i < lo || i > hi) weights[i] = 0.0;
  }
  normalize_profile(weights, grid.spacing());

  std::size_t first = weights.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == Amplitude{0.0, 0.0}) continue;
    first = std::min(first, i);
    last = i;
  }
  f.lo = first;
  f.hi = last;
  pulse.weights = std::move(weights);
  pulse.formation_stage = 1.0 - decay;
  pulse.center_index = peak_index(pulse.weights);
}

namespace {

std::size_t find_conscious_pulse(const SystemState& state) {
  std::size_t found = state.terms.size();
  for (std::size_t n = 0; n < state.terms.size(); ++n) {
    const auto* p = state.terms[n].brain.pulse();
    if (!p || p->kind != BrainKind::Conscious) continue;
    if (state.terms[n].coefficient == Amplitude{0.0, 0.0}) continue;
    if (found != state.terms.size()) {
      throw Error(Errc::InvalidArgument, "more than one conscious pulse to drift");
    }
    found = n;
  }
  if (found == state.terms.size()) throw Error(Errc::InvalidArgument, "no conscious pulse to drift");
  if (!state.terms[found].brain.pulse()->fully_formed()) {
    throw Error(Errc::NotFullyFormed, "conscious pulse is still forming");
  }
  return found;
}

void shift_pulse(Pulse& pulse, double shift_sites) {
  if (!pulse.drift) pulse.drift = DriftTrack{pulse.weights, 0.0};
  auto& track = *pulse.drift;
  const auto n = static_cast<std::ptrdiff_t>(track.reference.size());

  std::ptrdiff_t ref_lo = n;
  std::ptrdiff_t ref_hi = -1;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (track.reference[i] == Amplitude{0.0, 0.0}) continue;
    ref_lo = std::min(ref_lo, i);
    ref_hi = i;
  }
  // Clamp so the whole support stays on the grid.
  track.offset_sites = std::clamp(track.offset_sites + shift_sites, static_cast<double>(-ref_lo),
                                  static_cast<double>(n - 1 - ref_hi));

  const double whole = std::floor(track.offset_sites);
  const double frac = track.offset_sites - whole;
  const auto shift = static_cast<std::ptrdiff_t>(whole);
  auto at = [&](std::ptrdiff_t j) -> Amplitude {
    return (j >= 0 && j < n) ? track.reference[j] : Amplitude{0.0, 0.0};
  };
  // weights(i) = reference(i - offset), linearly interpolated.
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t j = i - shift;
    pulse.weights[i] = frac == 0.0 ? at(j) : (1.0 - frac) * at(j) + frac * at(j - 1);
  }
  normalize_profile(pulse.weights, pulse.grid.spacing());
  pulse.center_index = peak_index(pulse.weights);
}

}  // namespace

SystemState drift_pulse(const SystemState& state, const DriftParams& params, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  const std::size_t conscious = find_conscious_pulse(state);

  SystemState next = state;
  next.time = state.time + dt;
  Term& source = next.terms[conscious];
  Pulse& pulse = *source.brain.pulse();

  if (params.velocity != 0.0) shift_pulse(pulse, params.velocity * dt / state.grid.spacing());

  if (!params.shadow_ready) return next;

  const std::size_t n_sites = state.grid.size();
  const ObserverId observer = source.brain.observer();
  std::vector<std::ptrdiff_t> site_term(n_sites, -1);
  for (std::size_t n = 0; n < next.terms.size(); ++n) {
    const Term& t = next.terms[n];
    const auto* single = t.brain.single();
    if (single && single->kind == BrainKind::Ready && t.apparatus_label == params.shadow_label &&
        t.brain.observer() == observer) {
      site_term[single->index] = static_cast<std::ptrdiff_t>(n);
    }
  }

  std::vector<double> share(n_sites, 0.0);
  double total_share = 0.0;
  for (std::size_t u = 0; u < n_sites; ++u) {
    if (pulse.weights[u] == Amplitude{0.0, 0.0}) continue;
    if (site_term[u] >= 0 && next.terms[site_term[u]].phantom) continue;
    share[u] = std::norm(pulse.weights[u]) * state.grid.spacing();
    total_share += share[u];
  }

  std::vector<double> fed(n_sites, 0.0);
  const double available = std::norm(source.coefficient);
  const double fraction = std::min(params.feed_rate * dt, 1.0);
  if (total_share > 0.0 && fraction > 0.0 && available > 0.0) {
    const double moved = available * fraction;
    source.coefficient *= std::sqrt(1.0 - fraction);
    for (std::size_t u = 0; u < n_sites; ++u) {
      if (share[u] == 0.0) continue;
      const double dm = moved * share[u] / total_share;
      if (site_term[u] < 0) {
        site_term[u] = static_cast<std::ptrdiff_t>(next.terms.size());
        next.terms.push_back(Term{params.shadow_label, {0.0, 0.0},
                                  BrainFactor(SingleState{BrainKind::Ready, u}, observer)});
      }
      Term& target = next.terms[site_term[u]];
      const double grown = std::sqrt(std::norm(target.coefficient) + dm);
      target.coefficient = target.coefficient == Amplitude{0.0, 0.0}
                               ? Amplitude{grown, 0.0}
                               : target.coefficient / std::abs(target.coefficient) * grown;
      fed[u] = dm / dt;
    }
  }

  for (std::size_t u = 0; u < n_sites; ++u) {
    if (site_term[u] < 0) continue;
    Term& term = next.terms[site_term[u]];
    if (!term.phantom) update_phantom(term, fed[u]);
  }
  return next;
}

double relative_intensity(const Pulse& pulse, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi >= pulse.weights.size()) {
    throw Error(Errc::IndexOutOfRange, "intensity range [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "] invalid");
  }
  double sum = 0.0;
  for (std::size_t u = lo; u <= hi; ++u) sum += std::norm(pulse.weights[u]);
  return sum * pulse.grid.spacing();
}

}  // namespace pulsered
