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

#include "pulsered/state.hpp"

#include <algorithm>
#include <cmath>

#include "pulsered/error.hpp"

namespace pulsered {

double DisengagedX::norm() const noexcept {
  double sum = 0.0;
  for (const auto& w : profile) sum += std::norm(w);
  return sum * grid.spacing();
}

DisengagedX make_disengaged(const BrainGrid& grid) {
  std::vector<Amplitude> profile(grid.size(), Amplitude{1.0, 0.0});
  normalize_profile(profile, grid.spacing());
  return DisengagedX{grid, std::move(profile)};
}

DisengagedX disengage_from(const Pulse& pulse) {
  auto profile = pulse.weights;
  normalize_profile(profile, pulse.grid.spacing());
  return DisengagedX{pulse.grid, std::move(profile)};
}

double BrainFactor::norm() const noexcept {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SingleState>) {
          return 1.0;
        } else {
          return v.norm();
        }
      },
      value_);
}

std::optional<BrainKind> BrainFactor::kind() const noexcept {
  if (const auto* p = std::get_if<Pulse>(&value_)) return p->kind;
  if (const auto* s = std::get_if<SingleState>(&value_)) return s->kind;
  return std::nullopt;
}

void BrainFactor::set_kind(BrainKind kind) noexcept {
  if (auto* p = std::get_if<Pulse>(&value_)) p->kind = kind;
  if (auto* s = std::get_if<SingleState>(&value_)) s->kind = kind;
}

Amplitude BrainFactor::site_amplitude(std::size_t u) const {
  if (const auto* p = std::get_if<Pulse>(&value_)) return p->site_amplitude(u);
  if (const auto* s = std::get_if<SingleState>(&value_)) {
    return s->index == u ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
  }
  const auto& x = std::get<DisengagedX>(value_);
  if (u >= x.profile.size()) {
    throw Error(Errc::IndexOutOfRange, "site " + std::to_string(u) + " outside profile");
  }
  return x.profile[u] * std::sqrt(x.grid.spacing());
}

Amplitude inner_product(const BrainFactor& a, const BrainFactor& b, std::size_t n_sites) {
  Amplitude sum{0.0, 0.0};
  for (std::size_t u = 0; u < n_sites; ++u) {
    sum += std::conj(a.site_amplitude(u)) * b.site_amplitude(u);
  }
  return sum;
}

SystemState make_state(const BrainGrid& grid, std::vector<Term> terms, double time) {
  SystemState state{grid, std::move(terms), 1.0, time, 0.0};
  const double s = total_square_modulus(state);
  if (!(s > 0.0)) throw Error(Errc::NonpositiveS, "initial state has zero square modulus");
  state.s = s;
  return state;
}

double total_square_modulus(const SystemState& state) noexcept {
  // Summed in sorted order so the result does not depend on term order.
  std::vector<double> parts;
  parts.reserve(state.terms.size());
  for (const auto& term : state.terms) parts.push_back(term.square_modulus());
  std::sort(parts.begin(), parts.end());
  double sum = 0.0;
  for (double v : parts) sum += v;
  return sum;
}

}  // namespace pulsered
