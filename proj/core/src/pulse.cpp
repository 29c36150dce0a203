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

#include "pulsered/pulse.hpp"

#include <cmath>
#include <sstream>

#include "pulsered/error.hpp"

namespace pulsered {

double Pulse::norm() const noexcept {
  double sum = 0.0;
  for (const auto& w : weights) sum += std::norm(w);
  return sum * grid.spacing();
}

Amplitude Pulse::site_amplitude(std::size_t i) const {
  if (i >= weights.size()) {
    throw Error(Errc::IndexOutOfRange, "site " + std::to_string(i) + " outside pulse");
  }
  return weights[i] * std::sqrt(grid.spacing());
}

void normalize_profile(std::vector<Amplitude>& weights, double spacing) {
  double sum = 0.0;
  for (const auto& w : weights) sum += std::norm(w);
  sum *= spacing;
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw Error(Errc::InvalidArgument, "cannot normalize an empty profile");
  }
  const double scale = 1.0 / std::sqrt(sum);
  for (auto& w : weights) w *= scale;
}

std::vector<Amplitude> gaussian_profile(const BrainGrid& grid, double center, double sigma) {
  if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "sigma must be positive");
  std::vector<Amplitude> weights(grid.size(), Amplitude{0.0, 0.0});
  const double reach = kSupportSigmas * sigma;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.site(i) - center;
    if (std::abs(d) > reach) continue;
    weights[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  normalize_profile(weights, grid.spacing());
  return weights;
}

std::size_t peak_index(std::span<const Amplitude> weights) noexcept {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double v = std::norm(weights[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

Pulse make_pulse(const BrainGrid& grid, std::vector<Amplitude> weights, BrainKind kind) {
  if (weights.size() != grid.size()) {
    throw Error(Errc::GridMismatch, "profile length does not match grid");
  }
  normalize_profile(weights, grid.spacing());
  Pulse pulse{.grid = grid, .kind = kind, .weights = std::move(weights)};
  pulse.center_index = peak_index(pulse.weights);
  return pulse;
}

Pulse make_gaussian_pulse(const BrainGrid& grid, double center, double sigma, BrainKind kind) {
  if (!(sigma > 0.0)) throw Error(Errc::InvalidArgument, "sigma must be positive");
  if (sigma < 2.0 * grid.spacing()) {
    std::ostringstream msg;
    msg << "sigma " << sigma << " is below 2*du = " << 2.0 * grid.spacing();
    throw Error(Errc::GridTooCoarse, msg.str());
  }
  const double clearance = kEdgeClearanceSigmas * sigma;
  const double last = grid.site(grid.size() - 1);
  if (!grid.contains(center) || center - clearance < grid.origin() || center + clearance > last) {
    std::ostringstream msg;
    msg << "center " << center << " with sigma " << sigma << " does not fit in ["
        << grid.origin() << ", " << last << "] with " << kEdgeClearanceSigmas
        << " sigma clearance";
    throw Error(Errc::CenterOutOfRange, msg.str());
  }
  return make_pulse(grid, gaussian_profile(grid, center, sigma), kind);
}

std::size_t occupied_sites(const Pulse& pulse) noexcept {
  std::size_t count = 0;
  for (const auto& w : pulse.weights) {
    if (w != Amplitude{0.0, 0.0}) ++count;
  }
  return count;
}

double pulse_overlap(const Pulse& p, const Pulse& q) {
  if (!(p.grid == q.grid) || p.weights.size() != q.weights.size()) {
    throw Error(Errc::GridMismatch, "pulses live on different grids");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    sum += std::abs(p.weights[i]) * std::abs(q.weights[i]);
  }
  return sum * p.grid.spacing();
}

double fitted_sigma(const Pulse& pulse) {
  double mass = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < pulse.weights.size(); ++i) {
    const double m = std::norm(pulse.weights[i]);
    mass += m;
    mean += m * pulse.grid.site(i);
  }
  mean /= mass;
  double var = 0.0;
  for (std::size_t i = 0; i < pulse.weights.size(); ++i) {
    const double d = pulse.grid.site(i) - mean;
    var += std::norm(pulse.weights[i]) * d * d;
  }
  var /= mass;
  // |F|^2 of a Gaussian F with width sigma has variance sigma^2 / 2.
  return std::sqrt(2.0 * var);
}

}  // namespace pulsered
