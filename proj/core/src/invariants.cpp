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

#include "pulsered/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsered {

namespace {

bool same_brain(const BrainFactor& a, const BrainFactor& b) {
  if (a.value().index() != b.value().index()) return false;
  if (const auto* p = a.pulse()) return p->weights == b.pulse()->weights;
  if (const auto* s = a.single()) return *s == *b.single();
  return std::get<DisengagedX>(a.value()).profile == std::get<DisengagedX>(b.value()).profile;
}

}  // namespace

InvariantMonitor::InvariantMonitor() {
  for (const char* name : {"pulse_normalization", "norm_conservation", "current_antisymmetry",
                           "rule2_ready_tagging", "phantom_freeze", "reduction_zeroing",
                           "coefficient_provenance", "rule4_guard", "determinism"}) {
    checks_.push_back(InvariantCheck{.name = name});
  }
}

InvariantCheck& InvariantMonitor::check(const std::string& name) {
  auto it = std::find_if(checks_.begin(), checks_.end(),
                         [&](const InvariantCheck& c) { return c.name == name; });
  if (it != checks_.end()) return *it;
  checks_.push_back(InvariantCheck{.name = name});
  return checks_.back();
}

void InvariantMonitor::record(const std::string& name, bool ok, double deviation,
                              const std::string& detail) {
  auto& c = check(name);
  ++c.evaluations;
  c.worst = std::max(c.worst, deviation);
  if (!ok && c.passed) {
    c.passed = false;
    c.detail = detail;
  }
}

void InvariantMonitor::check_pulses(const SystemState& state) {
  for (std::size_t n = 0; n < state.terms.size(); ++n) {
    const auto* pulse = state.terms[n].brain.pulse();
    if (!pulse) continue;
    const double dev = std::abs(pulse->norm() - 1.0);
    std::ostringstream msg;
    msg << "term " << n << " pulse norm off by " << dev << " at t=" << state.time;
    record("pulse_normalization", dev <= kNormTolerance, dev, msg.str());
  }
}

void InvariantMonitor::on_snapshot(const SystemState& state) { check_pulses(state); }

void InvariantMonitor::on_step(const SystemState& before, const SystemState& after,
                               const CurrentReport& report) {
  check_pulses(after);

  const double dt = after.time - before.time;
  const double drift = std::abs(total_square_modulus(after) - total_square_modulus(before));
  {
    std::ostringstream msg;
    msg << "square modulus moved by " << drift << " over dt=" << dt << " at t=" << after.time;
    record("norm_conservation", drift <= kConservationPerTime * dt, drift / dt, msg.str());
  }
  {
    const double net = std::abs(report.net());
    std::ostringstream msg;
    msg << "net current " << net << " at t=" << after.time;
    record("current_antisymmetry", net <= kCurrentTolerance, net, msg.str());
  }

  for (std::size_t n = 0; n < after.terms.size(); ++n) {
    const Term& next = after.terms[n];
    const bool existed = n < before.terms.size();
    const double prev_sm = existed ? before.terms[n].square_modulus() : 0.0;
    if (prev_sm == 0.0 && next.square_modulus() > 0.0) {
      record("rule2_ready_tagging", next.brain.is_ready(), 0.0,
             "term " + std::to_string(n) + " came into being without a ready factor");
    }
    if (existed && before.terms[n].phantom) {
      const Term& prev = before.terms[n];
      const bool frozen = next.phantom && next.coefficient == prev.coefficient &&
                          same_brain(prev.brain, next.brain);
      const double dev = std::abs(next.coefficient - prev.coefficient);
      std::ostringstream msg;
      msg << "phantom term " << n << " changed by " << dev << " at t=" << after.time;
      record("phantom_freeze", frozen, dev, msg.str());
    }
  }
}

void InvariantMonitor::on_reduction(const SystemState& pre, const SystemState& post,
                                    std::size_t u_sc) {
  std::size_t survivors = 0;
  for (std::size_t n = 0; n < post.terms.size(); ++n) {
    const Term& term = post.terms[n];
    const auto* single = term.brain.single();
    const bool survivor = single && single->kind == BrainKind::Conscious && single->index == u_sc &&
                          term.coefficient != Amplitude{0.0, 0.0};
    if (!survivor) {
      const double dev = std::abs(term.coefficient);
      record("reduction_zeroing", term.coefficient == Amplitude{0.0, 0.0}, dev,
             "term " + std::to_string(n) + " not reduced to exactly zero");
      continue;
    }
    ++survivors;
    const Amplitude expected = pre.terms[n].coefficient * pre.terms[n].brain.site_amplitude(u_sc);
    const double dev = std::abs(term.coefficient - expected);
    std::ostringstream msg;
    msg << "term " << n << " coefficient differs from a_i F_i(u_sc) by " << dev;
    record("coefficient_provenance", dev <= kProvenanceTolerance, dev, msg.str());
  }
  record("reduction_zeroing", survivors > 0, 0.0, "no term survived the reduction");
  const double pre_norm = total_square_modulus(pre);
  const double post_norm = total_square_modulus(post);
  record("reduction_zeroing", post_norm <= pre_norm * (1.0 + 1e-15), post_norm - pre_norm,
         "reduction increased the square modulus");
}

void InvariantMonitor::on_rule4(std::size_t rejected, std::size_t executed) {
  record("rule4_guard", executed == 0, static_cast<double>(executed),
         std::to_string(executed) + " ready-to-ready transfers executed (" +
             std::to_string(rejected) + " rejected)");
}

void InvariantMonitor::on_determinism(bool identical, const std::string& detail) {
  record("determinism", identical, identical ? 0.0 : 1.0, detail);
}

bool InvariantMonitor::passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const auto& c) { return c.passed; });
}

const InvariantCheck* InvariantMonitor::first_failure() const noexcept {
  for (const auto& c : checks_) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

}  // namespace pulsered
