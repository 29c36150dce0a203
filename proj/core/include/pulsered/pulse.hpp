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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pulsered/grid.hpp"

namespace pulsered {

using Amplitude = std::complex<double>;

enum class BrainKind { Conscious, Ready };

/// Gaussian profiles are cut to exactly zero beyond this many widths.
inline constexpr double kSupportSigmas = 6.0;

/// Pulses built through make_gaussian_pulse must keep this many widths of
/// clearance from both grid edges.
inline constexpr double kEdgeClearanceSigmas = 4.0;

/// Bookkeeping for a pulse that is still widening after a stochastic choice.
struct StagedFormation {
  double t_sc = 0.0;
  double tau = 0.0;
  double target_sigma = 0.0;
  std::size_t neighbor_radius = 1;
  std::size_t anchor = 0;  // the chosen site
  std::size_t lo = 0;      // occupied range, inclusive
  std::size_t hi = 0;
};

/// Reference shape and accumulated displacement of a drifting pulse. Weights
/// are always resampled from the reference so repeated sub-site shifts do not
/// smear the profile.
struct DriftTrack {
  std::vector<Amplitude> reference;
  double offset_sites = 0.0;
};

/// Discretized amplitude profile F(u) of a conscious or ready brain pulse.
/// weights hold density amplitudes: sum |F(u)|^2 * du == 1.
struct Pulse {
  BrainGrid grid;
  BrainKind kind = BrainKind::Conscious;
  std::size_t center_index = 0;
  std::vector<Amplitude> weights;
  double formation_stage = 1.0;
  std::optional<StagedFormation> formation{};
  std::optional<DriftTrack> drift{};

  double norm() const noexcept;
  bool fully_formed() const noexcept { return !formation.has_value(); }

  /// Amplitude of the normalized grid basis state at site i, F(u_i) * sqrt(du).
  Amplitude site_amplitude(std::size_t i) const;
};

/// Gaussian F(u) ~ exp(-(u - center)^2 / (2 sigma^2)), truncated at
/// kSupportSigmas, clipped to the grid and normalized. No edge checks.
std::vector<Amplitude> gaussian_profile(const BrainGrid& grid, double center, double sigma);

/// Validated pulse constructor.
/// Throws GridTooCoarse when sigma < 2 du and CenterOutOfRange when the center
/// is off the grid or closer than kEdgeClearanceSigmas widths to an edge.
Pulse make_gaussian_pulse(const BrainGrid& grid, double center, double sigma, BrainKind kind);

/// Pulse built from an arbitrary profile; normalizes and sets center_index.
Pulse make_pulse(const BrainGrid& grid, std::vector<Amplitude> weights, BrainKind kind);

/// Index of the largest |w|^2, lowest index on ties.
std::size_t peak_index(std::span<const Amplitude> weights) noexcept;

/// Scales weights so that sum |w|^2 * spacing == 1.
void normalize_profile(std::vector<Amplitude>& weights, double spacing);

std::size_t occupied_sites(const Pulse& pulse) noexcept;

/// sum_u |F_p(u)| |F_q(u)| du. Throws GridMismatch.
double pulse_overlap(const Pulse& p, const Pulse& q);

/// RMS width of |F|^2 scaled back to the Gaussian sigma of F.
double fitted_sigma(const Pulse& pulse);

}  // namespace pulsered
