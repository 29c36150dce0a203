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

#include "pulsered/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "pulsered/error.hpp"

namespace pulsered {

EnvelopeSchedule EnvelopeSchedule::hold() { return EnvelopeSchedule(RampKind::Hold, 0.0, 0.0, {}); }

EnvelopeSchedule EnvelopeSchedule::ramp(RampKind kind, double t_start, double t_end,
                                        std::span<const TransferSpec> transfers,
                                        const SystemState& state) {
  if (kind == RampKind::Hold) return hold();
  if (!(t_end > t_start)) throw Error(Errc::InvalidArgument, "ramp needs t_end > t_start");

  std::set<std::size_t> touched;
  std::vector<Transfer> bound;
  bound.reserve(transfers.size());
  for (const auto& spec : transfers) {
    if (spec.source >= state.terms.size() || spec.destination >= state.terms.size()) {
      throw Error(Errc::IndexOutOfRange, "transfer endpoint outside the term list");
    }
    if (spec.source == spec.destination) {
      throw Error(Errc::InvalidArgument, "transfer source equals destination");
    }
    if (!(spec.final_fraction >= 0.0 && spec.final_fraction <= 1.0)) {
      throw Error(Errc::InvalidArgument, "final_fraction must lie in [0, 1]");
    }
    if (!touched.insert(spec.source).second || !touched.insert(spec.destination).second) {
      throw Error(Errc::InvalidArgument, "a term may take part in at most one transfer");
    }
    const auto& src = state.terms[spec.source];
    const auto& dst = state.terms[spec.destination];
    if (src.phantom || dst.phantom) {
      throw Error(Errc::PhantomTransfer, "transfer " + std::to_string(spec.source) + " -> " +
                                             std::to_string(spec.destination) +
                                             " touches a phantom term");
    }
    bound.push_back(Transfer{spec.source, spec.destination, spec.final_fraction, src.coefficient,
                             dst.coefficient});
  }
  return EnvelopeSchedule(kind, t_start, t_end, std::move(bound));
}

double EnvelopeSchedule::transferred_fraction(const Transfer& transfer, double t) const noexcept {
  if (kind_ == RampKind::Hold) return 0.0;
  const double progress = std::clamp((t - t_start_) / (t_end_ - t_start_), 0.0, 1.0);
  if (kind_ == RampKind::LinearRamp) return transfer.final_fraction * progress;
  if (progress == 1.0) return transfer.final_fraction;
  const double theta_max = std::asin(std::sqrt(transfer.final_fraction));
  const double s = std::sin(theta_max * progress);
  return s * s;
}

bool EnvelopeSchedule::active_over(double t0, double t1) const noexcept {
  if (kind_ == RampKind::Hold || transfers_.empty()) return false;
  return t1 > t_start_ && t0 < t_end_;
}

EnvelopeSchedule EnvelopeSchedule::without(std::span<const std::size_t> transfer_indices) const {
  std::vector<Transfer> kept;
  for (std::size_t i = 0; i < transfers_.size(); ++i) {
    if (std::find(transfer_indices.begin(), transfer_indices.end(), i) == transfer_indices.end()) {
      kept.push_back(transfers_[i]);
    }
  }
  return EnvelopeSchedule(kind_, t_start_, t_end_, std::move(kept));
}

}  // namespace pulsered
