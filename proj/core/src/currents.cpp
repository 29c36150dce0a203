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

#include "pulsered/currents.hpp"

#include <cmath>

#include "pulsered/error.hpp"

namespace pulsered {

double CurrentReport::net() const noexcept {
  double sum = 0.0;
  for (double j : per_term) sum += j;
  return sum;
}

namespace {

void append_site_currents(std::size_t index, const Term* before, const Term& after, double dt,
                          std::size_t n_sites, std::vector<SiteCurrent>& out) {
  const double c_new = std::norm(after.coefficient);
  const double c_old = before ? std::norm(before->coefficient) : 0.0;

  if (const auto* single = after.brain.single()) {
    double old_mass = 0.0;
    if (before) old_mass = c_old * std::norm(before->brain.site_amplitude(single->index));
    out.push_back({index, single->index, (c_new - old_mass) / dt});
    return;
  }

  const Pulse* p_new = after.brain.pulse();
  const Pulse* p_old = before ? before->brain.pulse() : nullptr;
  const double du = p_new->grid.spacing();
  for (std::size_t u = 0; u < n_sites; ++u) {
    const double w_new = std::norm(p_new->weights[u]);
    double w_old = 0.0;
    if (p_old) {
      w_old = std::norm(p_old->weights[u]);
    } else if (before) {
      w_old = std::norm(before->brain.site_amplitude(u)) / du;
    }
    if (w_new == 0.0 && w_old == 0.0) continue;
    out.push_back({index, u, (c_new * w_new - c_old * w_old) * du / dt});
  }
}

}  // namespace

CurrentReport measure_currents(const SystemState& before, const SystemState& after, double dt) {
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  CurrentReport report;
  report.per_term.resize(after.terms.size(), 0.0);
  for (std::size_t n = 0; n < after.terms.size(); ++n) {
    const Term* prev = n < before.terms.size() ? &before.terms[n] : nullptr;
    const double old_sm = prev ? prev->square_modulus() : 0.0;
    const double j = (after.terms[n].square_modulus() - old_sm) / dt;
    report.per_term[n] = j;
    if (j > 0.0) report.total_positive += j;
    if (after.terms[n].brain.is_ready()) {
      append_site_currents(n, prev, after.terms[n], dt, after.grid.size(), report.per_site);
    }
  }
  return report;
}

}  // namespace pulsered
