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
#include <span>
#include <vector>

#include "pulsered/state.hpp"

namespace pulsered {

/// Time course of the apparatus coefficients, standing in for the Hamiltonian.
///  - TrigRamp:   angle theta ramps linearly to asin(sqrt(final_fraction));
///                source = a0 cos(theta), destination gains a0 sin(theta).
///  - LinearRamp: the transferred square modulus grows linearly in time.
///  - Hold:       nothing moves.
/// Both ramps conserve |source|^2 + |destination|^2 exactly.
enum class RampKind { TrigRamp, LinearRamp, Hold };

struct TransferSpec {
  std::size_t source = 0;
  std::size_t destination = 0;
  double final_fraction = 1.0;  // share of |a0|^2 moved by t_end
};

struct Transfer {
  std::size_t source = 0;
  std::size_t destination = 0;
  double final_fraction = 1.0;
  Amplitude source_initial{0.0, 0.0};
  Amplitude destination_initial{0.0, 0.0};
};

class EnvelopeSchedule {
 public:
  static EnvelopeSchedule hold();

  /// Binds transfers to the coefficients of `state` at construction time.
  /// Throws PhantomTransfer if any endpoint is a phantom term.
  static EnvelopeSchedule ramp(RampKind kind, double t_start, double t_end,
                               std::span<const TransferSpec> transfers, const SystemState& state);

  RampKind kind() const noexcept { return kind_; }
  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  const std::vector<Transfer>& transfers() const noexcept { return transfers_; }

  /// Fraction of |a0|^2 that has left the source by time t.
  double transferred_fraction(const Transfer& transfer, double t) const noexcept;

  /// True when a ramp moves amplitude somewhere inside (t0, t1].
  bool active_over(double t0, double t1) const noexcept;

  /// Copy with the listed transfer indices removed.
  EnvelopeSchedule without(std::span<const std::size_t> transfer_indices) const;

 private:
  EnvelopeSchedule(RampKind kind, double t_start, double t_end, std::vector<Transfer> transfers)
      : kind_(kind), t_start_(t_start), t_end_(t_end), transfers_(std::move(transfers)) {}

  RampKind kind_;
  double t_start_;
  double t_end_;
  std::vector<Transfer> transfers_;
};

}  // namespace pulsered
