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

#include "pulsered/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pulsered/analysis.hpp"
#include "pulsered/dynamics.hpp"
#include "pulsered/error.hpp"

namespace pulsered {

namespace {

constexpr double kTamperPhase = 1e-6;

bool observation_family(ScenarioName name) {
  return name == ScenarioName::UnresolvableObservation || name == ScenarioName::TurnOff ||
         name == ScenarioName::Disengage;
}

std::size_t steps_for(double duration, double dt) {
  if (duration <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
}

void record(std::vector<TrajectorySample>* rows, const SystemState& state,
            const CurrentReport* report, const std::string& phase) {
  if (!rows) return;
  TrajectorySample row{state.time, phase, {}};
  row.terms.reserve(state.terms.size());
  for (std::size_t n = 0; n < state.terms.size(); ++n) {
    const Term& term = state.terms[n];
    const double j = report && n < report->per_term.size() ? report->per_term[n] : 0.0;
    row.terms.push_back({term.apparatus_label, term.square_modulus(), j, term.phantom});
  }
  rows->push_back(std::move(row));
}

/// Rotates the phase of the first coefficient that was already a phantom
/// before the step, once.
void tamper(SystemState& next, const SystemState& before, bool& done) {
  if (done) return;
  for (std::size_t n = 0; n < before.terms.size() && n < next.terms.size(); ++n) {
    Term& term = next.terms[n];
    if (!before.terms[n].phantom || term.coefficient == Amplitude{0.0, 0.0}) continue;
    term.coefficient *= std::polar(1.0, kTamperPhase);
    done = true;
    return;
  }
}

struct Stepper {
  const ScenarioConfig& cfg;
  const RunOptions& options;
  std::vector<TrajectorySample>* rows;
  bool tampered = false;

  SystemState hold(SystemState state, std::size_t n, const std::string& phase,
                   std::vector<FormationSample>* samples = nullptr) {
    const auto schedule = EnvelopeSchedule::hold();
    for (std::size_t i = 0; i < n; ++i) {
      auto result = step(state, schedule, cfg.dt);
      if (options.tamper_phantom) tamper(result.state, state, tampered);
      if (options.monitor) options.monitor->on_step(state, result.state, result.report);
      record(rows, result.state, &result.report, phase);
      if (samples) samples->push_back(formation_sample(result.state));
      state = std::move(result.state);
    }
    return state;
  }

  static FormationSample formation_sample(const SystemState& state) {
    for (const auto& term : state.terms) {
      const auto* pulse = term.brain.pulse();
      if (!pulse || term.coefficient == Amplitude{0.0, 0.0}) continue;
      return {state.time, occupied_sites(*pulse), pulse->norm(), fitted_sigma(*pulse),
              pulse->formation_stage};
    }
    return {state.time, 0, 0.0, 0.0, 0.0};
  }
};

Pulse destination_pulse(const BrainGrid& grid, const PulseSpec& spec) {
  // Tagged Ready by the dynamics once current flows in (Rule 2).
  return make_gaussian_pulse(grid, spec.center, spec.sigma, BrainKind::Conscious);
}

BrainFactor::Variant destination_factor(const ScenarioConfig& cfg, const BrainGrid& grid,
                                        const PulseSpec& spec) {
  if (cfg.single_state_x) {
    if (!grid.contains(spec.center)) {
      throw Error(Errc::CenterOutOfRange, "ready state center outside grid");
    }
    return SingleState{BrainKind::Conscious, grid.nearest_index(spec.center)};
  }
  return destination_pulse(grid, spec);
}

/// F(u) sqrt(du) for a ready factor, recomputed from its configuration.
Amplitude configured_site_amplitude(const ScenarioConfig& cfg, const BrainGrid& grid,
                                    const PulseSpec& spec, std::size_t u) {
  if (cfg.single_state_x) {
    return grid.nearest_index(spec.center) == u ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
  }
  return gaussian_profile(grid, spec.center, spec.sigma)[u] * std::sqrt(grid.spacing());
}

std::size_t formation_hold_steps(const ScenarioConfig& cfg) {
  if (cfg.formation_steps > 0) return cfg.formation_steps;
  const auto policy = cfg.formation_policy();
  if (policy.mode == FormationMode::Instantaneous) return 0;
  return steps_for(kFormationCompleteTaus * policy.tau, cfg.dt) + 1;
}

std::vector<LabelCoefficient> live_coefficients(const SystemState& state) {
  std::vector<LabelCoefficient> out;
  for (std::size_t n = 0; n < state.terms.size(); ++n) {
    const auto& term = state.terms[n];
    if (term.coefficient == Amplitude{0.0, 0.0}) continue;
    out.push_back({term.apparatus_label, n, term.coefficient});
  }
  return out;
}

double ready_square_modulus(const SystemState& state, const std::vector<std::size_t>& terms) {
  double sum = 0.0;
  for (std::size_t n : terms) sum += state.terms[n].square_modulus();
  return sum;
}

double marginal_site_probability(const SystemState& state, const CurrentReport& report,
                                 std::size_t site) {
  double total = 0.0;
  double at_site = 0.0;
  for (const auto& sc : report.per_site) {
    if (sc.current <= 0.0) continue;
    const Term& term = state.terms[sc.term];
    if (term.phantom || !term.brain.is_ready()) continue;
    total += sc.current;
    if (sc.site == site) at_site += sc.current;
  }
  return total > 0.0 ? at_site / total : 0.0;
}

}  // namespace

PreparedScenario::PreparedScenario(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const BrainGrid grid = cfg_.grid();
  cfg_.formation_policy().validate(grid);
  const ObserverId observer{cfg_.observer};

  if (cfg_.name == ScenarioName::PulseDrift) {
    const Pulse conscious =
        make_gaussian_pulse(grid, cfg_.conscious.center, cfg_.conscious.sigma, BrainKind::Conscious);
    std::vector<Term> terms;
    terms.push_back(Term{1, {cfg_.a1, 0.0}, BrainFactor(conscious, observer)});
    initial_ = make_state(grid, std::move(terms));
    return;
  }

  std::vector<TransferSpec> transfers;
  std::vector<Term> terms;
  if (observation_family(cfg_.name)) {
    const DisengagedX x = make_disengaged(grid);
    terms.push_back(Term{1, {cfg_.a1, 0.0}, BrainFactor(x, observer)});
    terms.push_back(Term{2, {cfg_.a2, 0.0}, BrainFactor(x, observer)});
    terms.push_back(Term{1, {0.0, 0.0}, BrainFactor(destination_factor(cfg_, grid, cfg_.ready_1), observer)});
    terms.push_back(Term{2, {0.0, 0.0}, BrainFactor(destination_factor(cfg_, grid, cfg_.ready_2), observer)});
    transfers = {{0, 2, cfg_.ramp.final_fraction}, {1, 3, cfg_.ramp.final_fraction}};
    ready_terms_ = {2, 3};
  } else {
    const Pulse conscious =
        make_gaussian_pulse(grid, cfg_.conscious.center, cfg_.conscious.sigma, BrainKind::Conscious);
    terms.push_back(Term{1, {cfg_.a1, 0.0}, BrainFactor(conscious, observer)});
    terms.push_back(Term{2, {0.0, 0.0}, BrainFactor(destination_pulse(grid, cfg_.ready_1), observer)});
    transfers = {{0, 1, cfg_.ramp.final_fraction}};
    ready_terms_ = {1};
  }
  initial_ = make_state(grid, std::move(terms));

  schedule_ = cfg_.ramp.kind == RampKind::Hold
                  ? EnvelopeSchedule::hold()
                  : EnvelopeSchedule::ramp(cfg_.ramp.kind, cfg_.ramp.t_start, cfg_.ramp.t_end,
                                           transfers, initial_);

  track_.push_back({initial_, CurrentReport{}});
  while (track_.back().state.time < cfg_.ramp.t_end) {
    auto result = step(track_.back().state, *schedule_, cfg_.dt);
    track_.push_back({std::move(result.state), std::move(result.report)});
  }
  ready_final_ = ready_square_modulus(track_.back().state, ready_terms_);
}

std::vector<double> PreparedScenario::expected_site_distribution() const {
  std::vector<double> expected(initial_.grid.size(), 0.0);
  for (std::size_t k = 1; k < track_.size(); ++k) {
    const auto& [state, report] = track_[k];
    for (const auto& sc : report.per_site) {
      if (sc.current <= 0.0) continue;
      const Term& term = state.terms[sc.term];
      if (term.phantom || !term.brain.is_ready()) continue;
      expected[sc.site] += sc.current;
    }
  }
  double total = 0.0;
  for (double e : expected) total += e;
  if (total > 0.0) {
    for (double& e : expected) e /= total;
  }
  return expected;
}

ScenarioRun PreparedScenario::run_trial(std::uint64_t trial, const RunOptions& options) const {
  if (cfg_.name == ScenarioName::PulseDrift) return run_drift(trial, options);

  ScenarioRun run;
  run.name = cfg_.name;
  run.seed = cfg_.seed;
  run.trial = trial;
  auto* rows = options.record_trajectory ? &run.trajectory : nullptr;
  InvariantMonitor* monitor = options.monitor;
  Stepper stepper{cfg_, options, rows};
  RngStream rng = RngStream::for_trial(cfg_.seed, trial);

  record(rows, initial_, nullptr, "initial");
  if (monitor) monitor->on_snapshot(initial_);

  std::optional<HitChoice> hit;
  std::size_t k = 1;
  for (; k < track_.size(); ++k) {
    if (monitor) monitor->on_step(track_[k - 1].state, track_[k].state, track_[k].report);
    record(rows, track_[k].state, &track_[k].report, "ramp");
    hit = sample_hit(track_[k].state, track_[k].report, cfg_.dt, rng, options.sampler);
    if (hit) break;
  }

  const BrainGrid& grid = initial_.grid;
  const bool interaction_like =
      cfg_.name == ScenarioName::Interaction || cfg_.name == ScenarioName::FadeIn;

  if (!hit) {
    run.final_state = track_.back().state;
    if (interaction_like) {
      InteractionSummary sum;
      sum.s = initial_.s;
      sum.a2_final_sq = ready_final_;
      sum.closed_form_p_hit = closed_form_p_hit(ready_final_, initial_.s);
      if (cfg_.name == ScenarioName::FadeIn) {
        FadeInSummary fade;
        fade.interaction = sum;
        fade.target_sigma = cfg_.formation.target_sigma;
        run.summary = fade;
      } else {
        run.summary = sum;
      }
      return run;
    }
    throw Error(Errc::InvariantBreach,
                std::string(to_string(cfg_.name)) + ": completed observation produced no hit");
  }

  const SystemState& pre = track_[k].state;
  SystemState post = reduce(pre, hit->term, hit->site);
  run.events.push_back(describe_reduction(pre, post, *hit, trial));
  if (monitor) monitor->on_reduction(pre, post, hit->site);
  record(rows, post, nullptr, "reduction");

  SystemState formed = form_pulse(post, hit->site, cfg_.formation_policy());
  if (monitor) monitor->on_snapshot(formed);
  record(rows, formed, nullptr, "formation");

  const double t_sc = pre.time;
  const auto& transfers = schedule_->transfers();

  if (interaction_like) {
    InteractionSummary sum;
    sum.hit = true;
    sum.t_sc = t_sc;
    sum.u_sc = hit->site;
    sum.s = initial_.s;
    sum.a2_final_sq = ready_final_;
    sum.closed_form_p_hit = closed_form_p_hit(ready_final_, initial_.s);
    sum.post_coefficient = post.terms[1].coefficient;
    const Amplitude a2 =
        transfers[0].source_initial * std::sqrt(schedule_->transferred_fraction(transfers[0], t_sc));
    sum.expected_coefficient =
        a2 * gaussian_profile(grid, cfg_.ready_1.center, cfg_.ready_1.sigma)[hit->site] *
        std::sqrt(grid.spacing());

    std::vector<FormationSample> samples;
    samples.push_back(Stepper::formation_sample(formed));
    SystemState final_state =
        stepper.hold(std::move(formed), formation_hold_steps(cfg_), "formation", &samples);
    const auto* pulse = final_state.terms[1].brain.pulse();
    sum.formed_norm = pulse ? pulse->norm() : 0.0;
    sum.formed_center = pulse ? pulse->center_index : 0;
    run.final_state = std::move(final_state);

    if (cfg_.name == ScenarioName::FadeIn) {
      FadeInSummary fade;
      fade.interaction = sum;
      fade.samples = std::move(samples);
      fade.target_sigma = cfg_.formation.target_sigma;
      if (pulse) {
        fade.final_sigma = fitted_sigma(*pulse);
        fade.fully_formed = pulse->fully_formed();
      }
      fade.width_error = std::abs(fade.final_sigma / fade.target_sigma - 1.0);
      run.summary = std::move(fade);
    } else {
      run.summary = sum;
    }
    return run;
  }

  ObservationSummary obs;
  obs.hit = true;
  obs.t_sc = t_sc;
  obs.u_sc = hit->site;
  obs.s = initial_.s;
  obs.survivors = run.events.back().post_coefficients;
  {
    std::vector<std::size_t> labels;
    for (const auto& lc : obs.survivors) labels.push_back(lc.label);
    std::sort(labels.begin(), labels.end());
    obs.multiplicity =
        static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
  }
  double survivor_sq = 0.0;
  for (const auto& lc : obs.survivors) {
    const Transfer& tr = transfers[lc.term == 2 ? 0 : 1];
    const PulseSpec& spec = lc.term == 2 ? cfg_.ready_1 : cfg_.ready_2;
    const Amplitude a = tr.source_initial * std::sqrt(schedule_->transferred_fraction(tr, t_sc));
    const Amplitude expected = a * configured_site_amplitude(cfg_, grid, spec, hit->site);
    obs.provenance_error = std::max(obs.provenance_error, std::abs(lc.coefficient - expected));
    survivor_sq += std::norm(lc.coefficient);
  }
  obs.site_probability = marginal_site_probability(pre, track_[k].report, hit->site);
  obs.ready_fraction = ready_square_modulus(pre, ready_terms_) / ready_final_;
  obs.final_probability =
      survivor_sq / initial_.s / (obs.site_probability * obs.ready_fraction);
  obs.closed_form_final_probability =
      (cfg_.a1 * cfg_.a1 + cfg_.a2 * cfg_.a2) / initial_.s;

  SystemState state = stepper.hold(std::move(formed), formation_hold_steps(cfg_), "formation");

  if (cfg_.name == ScenarioName::UnresolvableObservation) {
    run.final_state = std::move(state);
    run.summary = std::move(obs);
    return run;
  }

  if (cfg_.name == ScenarioName::TurnOff) {
    TurnOffSummary off;
    off.observation = obs;
    off.closed_form_p2 = closed_form_p2_after_off(cfg_.a2 * cfg_.a2, initial_.s);
    state = stepper.hold(std::move(state), steps_for(t_sc + cfg_.t_off_delay - state.time, cfg_.dt),
                         "hold");
    off.t_off = state.time;
    double c1 = 0.0;
    double c2 = 0.0;
    for (const auto& term : state.terms) {
      if (term.apparatus_label == 1) c1 += std::norm(term.coefficient);
      if (term.apparatus_label == 2) c2 += std::norm(term.coefficient);
    }
    off.p_remain = c2 / (c1 + c2);
    off.spot_remains = rng.uniform() < off.p_remain;
    for (auto& term : state.terms) {
      if (term.apparatus_label == 1 || !off.spot_remains) term.coefficient = {0.0, 0.0};
    }
    record(rows, state, nullptr, "turn_off");
    run.final_state = std::move(state);
    run.summary = std::move(off);
    return run;
  }

  DisengageSummary dis;
  dis.observation = obs;
  state = stepper.hold(std::move(state), steps_for(t_sc + cfg_.t_dis_delay - state.time, cfg_.dt),
                       "hold");
  dis.t_dis = state.time;
  dis.before = live_coefficients(state);
  double norm_before = 0.0;
  double norm_after = 0.0;
  for (auto& term : state.terms) {
    if (term.coefficient == Amplitude{0.0, 0.0}) continue;
    const auto* pulse = term.brain.pulse();
    if (!pulse) continue;
    norm_before = std::max(norm_before, pulse->norm());
    term.brain = BrainFactor(disengage_from(*pulse), term.brain.observer());
    norm_after = std::max(norm_after, term.brain.norm());
  }
  dis.brain_norm_before = norm_before;
  dis.brain_norm_after = norm_after;
  dis.after = live_coefficients(state);
  record(rows, state, nullptr, "disengage");
  if (monitor) monitor->on_snapshot(state);

  SystemState held = stepper.hold(state, cfg_.hold_steps, "hold");
  for (std::size_t n = 0; n < held.terms.size(); ++n) {
    dis.max_hold_change = std::max(
        dis.max_hold_change, std::abs(held.terms[n].coefficient - state.terms[n].coefficient));
  }
  dis.coefficients_frozen = dis.before == dis.after && dis.max_hold_change == 0.0;
  run.final_state = std::move(held);
  run.summary = std::move(dis);
  return run;
}

ScenarioRun PreparedScenario::run_drift(std::uint64_t trial, const RunOptions& options) const {
  ScenarioRun run;
  run.name = cfg_.name;
  run.seed = cfg_.seed;
  run.trial = trial;
  auto* rows = options.record_trajectory ? &run.trajectory : nullptr;
  InvariantMonitor* monitor = options.monitor;

  const DriftParams params{cfg_.drift_velocity, cfg_.shadow_ready, cfg_.feed_rate, 2};
  DriftSummary sum;
  sum.velocity = cfg_.drift_velocity;
  sum.steps = cfg_.drift_steps;
  sum.start_center = initial_.terms[0].brain.pulse()->center_index;

  SystemState state = initial_;
  record(rows, state, nullptr, "initial");
  if (monitor) monitor->on_snapshot(state);

  std::map<std::size_t, Amplitude> frozen;  // term -> coefficient when it became a phantom
  bool tampered = false;

  for (std::size_t i = 0; i < cfg_.drift_steps; ++i) {
    if (cfg_.intra_ready_transfer) {
      std::size_t trailing = state.terms.size();
      std::size_t leading = state.terms.size();
      for (std::size_t n = 0; n < state.terms.size(); ++n) {
        const Term& term = state.terms[n];
        const auto* single = term.brain.single();
        if (!single || !term.brain.is_ready() || term.phantom) continue;
        if (term.coefficient == Amplitude{0.0, 0.0}) continue;
        if (trailing == state.terms.size() ||
            single->index < state.terms[trailing].brain.single()->index) {
          trailing = n;
        }
        if (leading == state.terms.size() ||
            single->index > state.terms[leading].brain.single()->index) {
          leading = n;
        }
      }
      if (trailing != leading && trailing < state.terms.size()) {
        if (cfg_.drift_velocity < 0.0) std::swap(trailing, leading);
        const TransferSpec spec{trailing, leading, 0.5};
        auto schedule = EnvelopeSchedule::ramp(RampKind::LinearRamp, state.time,
                                               state.time + 100.0 * cfg_.dt, {&spec, 1}, state);
        if (cfg_.guard) {
          std::vector<std::size_t> rejected;
          for (const auto& f : guard_rule4(schedule, state)) rejected.push_back(f.transfer);
          sum.rule4_rejected += rejected.size();
          schedule = schedule.without(rejected);
        }
        if (!schedule.transfers().empty()) {
          const std::size_t n_transfers = schedule.transfers().size();
          auto result = step(state, schedule, cfg_.dt);
          if (monitor) monitor->on_step(state, result.state, result.report);
          state = std::move(result.state);
          sum.rule4_executed += n_transfers;
        }
      }
    }

    SystemState next = drift_pulse(state, params, cfg_.dt);
    if (options.tamper_phantom) tamper(next, state, tampered);
    const CurrentReport report = measure_currents(state, next, cfg_.dt);
    if (monitor) monitor->on_step(state, next, report);
    record(rows, next, &report, "drift");
    for (std::size_t n = 0; n < next.terms.size(); ++n) {
      if (next.terms[n].phantom && !frozen.count(n)) frozen.emplace(n, next.terms[n].coefficient);
    }
    state = std::move(next);
  }
  if (monitor && cfg_.intra_ready_transfer) {
    monitor->on_rule4(sum.rule4_rejected, sum.rule4_executed);
  }

  for (const auto& [n, coefficient] : frozen) {
    sum.max_phantom_drift =
        std::max(sum.max_phantom_drift, std::abs(state.terms[n].coefficient - coefficient));
  }
  sum.phantom_sites = frozen.size();
  for (const auto& term : state.terms) {
    if (term.brain.single() && term.brain.is_ready() && !term.phantom) ++sum.live_ready_sites;
  }
  sum.end_center = state.terms[0].brain.pulse()->center_index;
  run.final_state = std::move(state);
  run.summary = sum;
  return run;
}

ScenarioRun run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  return PreparedScenario(cfg).run_trial(0, options);
}

}  // namespace pulsered
