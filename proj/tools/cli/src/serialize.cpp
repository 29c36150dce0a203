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

#include "pulsered_cli/serialize.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace pulsered::cli {

namespace {

Json complex_json(Amplitude a) { return Json{{"re", a.real()}, {"im", a.imag()}}; }

Json coefficients_json(const std::vector<LabelCoefficient>& list) {
  Json out = Json::array();
  for (const auto& lc : list) {
    out.push_back({{"label", lc.label}, {"term", lc.term}, {"coefficient", complex_json(lc.coefficient)}});
  }
  return out;
}

Json pulse_json(const PulseSpec& p) { return Json{{"center", p.center}, {"sigma", p.sigma}}; }

std::string ramp_name(RampKind kind) {
  switch (kind) {
    case RampKind::TrigRamp: return "trig";
    case RampKind::LinearRamp: return "linear";
    case RampKind::Hold: return "hold";
  }
  return "unknown";
}

Json interaction_json(const InteractionSummary& s) {
  return Json{{"hit", s.hit},
              {"t_sc", s.t_sc},
              {"u_sc", s.u_sc},
              {"s", s.s},
              {"a2_final_sq", s.a2_final_sq},
              {"closed_form_p_hit", s.closed_form_p_hit},
              {"post_coefficient", complex_json(s.post_coefficient)},
              {"expected_coefficient", complex_json(s.expected_coefficient)},
              {"formed_norm", s.formed_norm},
              {"formed_center", s.formed_center}};
}

Json observation_json(const ObservationSummary& s) {
  return Json{{"hit", s.hit},
              {"t_sc", s.t_sc},
              {"u_sc", s.u_sc},
              {"s", s.s},
              {"multiplicity", s.multiplicity},
              {"survivors", coefficients_json(s.survivors)},
              {"provenance_error", s.provenance_error},
              {"site_probability", s.site_probability},
              {"ready_fraction", s.ready_fraction},
              {"final_probability", s.final_probability},
              {"closed_form_final_probability", s.closed_form_final_probability}};
}

}  // namespace

Json to_json(const ScenarioConfig& c) {
  return Json{
      {"scenario", std::string(to_string(c.name))},
      {"seed", c.seed},
      {"dt", c.dt},
      {"observer", c.observer},
      {"guard", c.guard},
      {"grid", {{"n_points", c.grid_points}, {"spacing", c.grid_spacing}, {"origin", c.grid_origin}}},
      {"amplitudes", {{"a1", c.a1}, {"a2", c.a2}}},
      {"pulses",
       {{"conscious", pulse_json(c.conscious)},
        {"ready_1", pulse_json(c.ready_1)},
        {"ready_2", pulse_json(c.ready_2)}}},
      {"ramp",
       {{"kind", ramp_name(c.ramp.kind)},
        {"t_start", c.ramp.t_start},
        {"t_end", c.ramp.t_end},
        {"final_fraction", c.ramp.final_fraction}}},
      {"formation",
       {{"mode", c.formation.mode == FormationMode::Staged ? "staged" : "instant"},
        {"tau", c.formation_policy().tau},
        {"target_sigma", c.formation.target_sigma},
        {"neighbor_radius", c.formation.neighbor_radius},
        {"steps", c.formation_steps}}},
      {"variant", {{"single_state_x", c.single_state_x}}},
      {"turn_off", {{"delay", c.t_off_delay}}},
      {"disengage", {{"delay", c.t_dis_delay}, {"hold_steps", c.hold_steps}}},
      {"drift",
       {{"velocity", c.drift_velocity},
        {"steps", c.drift_steps},
        {"feed_rate", c.feed_rate},
        {"shadow_ready", c.shadow_ready},
        {"intra_ready_transfer", c.intra_ready_transfer}}},
      {"montecarlo", {{"trials", c.trials}}},
  };
}

Json to_json(const ReductionEvent& e) {
  return Json{{"trial", e.trial},
              {"t_sc", e.t_sc},
              {"term_hit", e.term_hit},
              {"u_sc", e.u_sc},
              {"pre_norm", e.pre_norm},
              {"post_norm", e.post_norm},
              {"post_coefficients", coefficients_json(e.post_coefficients)},
              {"rng_draws", {e.rng_draws[0], e.rng_draws[1]}},
              {"rng_counter", e.rng_counter},
              {"site_probability", e.site_probability}};
}

Json to_json(const ScenarioSummary& summary) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, InteractionSummary>) {
          return interaction_json(s);
        } else if constexpr (std::is_same_v<T, ObservationSummary>) {
          return observation_json(s);
        } else if constexpr (std::is_same_v<T, TurnOffSummary>) {
          return Json{{"observation", observation_json(s.observation)},
                      {"t_off", s.t_off},
                      {"p_remain", s.p_remain},
                      {"spot_remains", s.spot_remains},
                      {"closed_form_p2", s.closed_form_p2}};
        } else if constexpr (std::is_same_v<T, DisengageSummary>) {
          return Json{{"observation", observation_json(s.observation)},
                      {"t_dis", s.t_dis},
                      {"before", coefficients_json(s.before)},
                      {"after", coefficients_json(s.after)},
                      {"coefficients_frozen", s.coefficients_frozen},
                      {"brain_norm_before", s.brain_norm_before},
                      {"brain_norm_after", s.brain_norm_after},
                      {"max_hold_change", s.max_hold_change}};
        } else if constexpr (std::is_same_v<T, DriftSummary>) {
          return Json{{"velocity", s.velocity},
                      {"steps", s.steps},
                      {"start_center", s.start_center},
                      {"end_center", s.end_center},
                      {"phantom_sites", s.phantom_sites},
                      {"live_ready_sites", s.live_ready_sites},
                      {"max_phantom_drift", s.max_phantom_drift},
                      {"rule4_rejected", s.rule4_rejected},
                      {"rule4_executed", s.rule4_executed}};
        } else {
          Json samples = Json::array();
          for (const auto& f : s.samples) {
            samples.push_back({{"t", f.t},
                               {"occupied", f.occupied},
                               {"norm", f.norm},
                               {"sigma", f.sigma},
                               {"stage", f.stage}});
          }
          return Json{{"interaction", interaction_json(s.interaction)},
                      {"target_sigma", s.target_sigma},
                      {"final_sigma", s.final_sigma},
                      {"width_error", s.width_error},
                      {"fully_formed", s.fully_formed},
                      {"samples", std::move(samples)}};
        }
      },
      summary);
}

Json to_json(const ProbabilityReport& r) {
  return Json{{"closed_form", r.closed_form}, {"empirical", r.empirical}, {"n_trials", r.n_trials},
              {"std_error", r.std_error},     {"z_score", r.z_score},     {"pass", r.pass}};
}

Json to_json(const HitHistogram& h) {
  return Json{{"counts", h.counts},         {"frequency", h.frequency}, {"expected", h.expected},
              {"chi_square", h.chi_square}, {"dof", h.dof},             {"p_value", h.p_value},
              {"pass", h.pass}};
}

Json to_json(const MonteCarloResult& r) {
  Json comparisons = Json::array();
  for (const auto& c : r.comparisons) {
    Json entry = to_json(c.report);
    entry["name"] = c.name;
    comparisons.push_back(std::move(entry));
  }
  Json multiplicity = Json::object();
  for (const auto& [labels, count] : r.multiplicity) multiplicity[std::to_string(labels)] = count;
  return Json{{"scenario", std::string(to_string(r.scenario))},
              {"seed", r.seed},
              {"trials", r.trials},
              {"hits", r.hits},
              {"pass", r.pass()},
              {"comparisons", std::move(comparisons)},
              {"histogram", r.histogram ? to_json(*r.histogram) : Json(nullptr)},
              {"multiplicity", std::move(multiplicity)},
              {"max_provenance_error", r.max_provenance_error}};
}

Json to_json(const std::vector<InvariantCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name},
                   {"pass", c.passed},
                   {"evaluations", c.evaluations},
                   {"worst", c.worst},
                   {"detail", c.detail}});
  }
  return out;
}

Json events_json(const ScenarioRun& run) {
  Json events = Json::array();
  for (const auto& e : run.events) events.push_back(to_json(e));
  return Json{{"scenario", std::string(to_string(run.name))},
              {"seed", run.seed},
              {"trial", run.trial},
              {"events", std::move(events)}};
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& trajectory) {
  out << "t,phase,term,label,square_modulus,current,phantom\n";
  char buf[64];
  auto num = [&](double v) -> const char* {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (const auto& row : trajectory) {
    for (std::size_t n = 0; n < row.terms.size(); ++n) {
      const auto& term = row.terms[n];
      out << num(row.t) << ',' << row.phase << ',' << n << ',' << term.label << ',';
      out << num(term.square_modulus) << ',';
      out << num(term.current) << ',' << (term.phantom ? 1 : 0) << '\n';
    }
  }
}

}  // namespace pulsered::cli
