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
#include <optional>
#include <variant>
#include <vector>

#include "pulsered/grid.hpp"
#include "pulsered/pulse.hpp"

namespace pulsered {

enum class ObserverId : std::uint32_t {};

/// One grid basis state B_u, conscious or ready. Unit norm.
struct SingleState {
  BrainKind kind = BrainKind::Ready;
  std::size_t index = 0;
  bool operator==(const SingleState&) const = default;
};

/// Observer state {X} not engaged with the apparatus. Unit norm profile.
struct DisengagedX {
  BrainGrid grid;
  std::vector<Amplitude> profile;

  double norm() const noexcept;
};

/// Uniform {X} spread across the whole grid.
DisengagedX make_disengaged(const BrainGrid& grid);

/// The disengaged state that evolves out of a conscious pulse keeps its shape.
DisengagedX disengage_from(const Pulse& pulse);

class BrainFactor {
 public:
  using Variant = std::variant<Pulse, SingleState, DisengagedX>;

  BrainFactor(Variant value, ObserverId observer) : value_(std::move(value)), observer_(observer) {}

  const Variant& value() const noexcept { return value_; }
  Variant& value() noexcept { return value_; }
  ObserverId observer() const noexcept { return observer_; }

  double norm() const noexcept;

  /// Conscious or Ready for active brain factors, nullopt for {X}.
  std::optional<BrainKind> kind() const noexcept;
  bool is_ready() const noexcept { return kind() == BrainKind::Ready; }
  bool is_conscious() const noexcept { return kind() == BrainKind::Conscious; }
  void set_kind(BrainKind kind) noexcept;

  /// Amplitude of normalized grid basis state u within this factor.
  Amplitude site_amplitude(std::size_t u) const;

  const Pulse* pulse() const noexcept { return std::get_if<Pulse>(&value_); }
  Pulse* pulse() noexcept { return std::get_if<Pulse>(&value_); }
  const SingleState* single() const noexcept { return std::get_if<SingleState>(&value_); }

 private:
  Variant value_;
  ObserverId observer_;
};

/// <a|b> over the grid basis.
Amplitude inner_product(const BrainFactor& a, const BrainFactor& b, std::size_t n_sites);

/// One product component: apparatus basis label x coefficient x brain factor.
/// The apparatus basis is orthonormal, so the apparatus integral over x is
/// folded into |coefficient|^2.
struct Term {
  std::size_t apparatus_label = 0;
  Amplitude coefficient{0.0, 0.0};
  BrainFactor brain;
  bool phantom = false;
  double inflow = 0.0;       // incoming current over the last step
  double peak_inflow = 0.0;  // largest incoming current seen so far

  double square_modulus() const noexcept { return std::norm(coefficient) * brain.norm(); }
};

struct SystemState {
  BrainGrid grid;
  std::vector<Term> terms;
  double s = 1.0;         // Rule (1) normalizer, fixed at scenario start
  double time = 0.0;
  double hit_mass = 0.0;  // sum of per-step unconditional hit probabilities spent so far
};

/// Builds a state whose s is its initial square modulus.
SystemState make_state(const BrainGrid& grid, std::vector<Term> terms, double time = 0.0);

double total_square_modulus(const SystemState& state) noexcept;

}  // namespace pulsered
