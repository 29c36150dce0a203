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

namespace pulsered {

/// Uniform, non-periodic discretization of the brain variable u. Site i sits
/// at origin + i * spacing; the grid covers [origin, origin + n * spacing).
class BrainGrid {
 public:
  static constexpr std::size_t kMinPoints = 8;

  /// Minimal valid grid: kMinPoints sites covering [0, 1).
  BrainGrid() : BrainGrid(kMinPoints, 1.0 / static_cast<double>(kMinPoints)) {}
  BrainGrid(std::size_t n_points, double spacing, double origin = 0.0);

  std::size_t size() const noexcept { return n_points_; }
  double spacing() const noexcept { return spacing_; }
  double origin() const noexcept { return origin_; }
  double upper() const noexcept { return origin_ + static_cast<double>(n_points_) * spacing_; }

  double site(std::size_t i) const noexcept { return origin_ + static_cast<double>(i) * spacing_; }
  bool contains(double u) const noexcept { return u >= origin_ && u < upper(); }

  /// Nearest site to u, clamped onto the grid.
  std::size_t nearest_index(double u) const noexcept;

  bool operator==(const BrainGrid&) const = default;

 private:
  std::size_t n_points_;
  double spacing_;
  double origin_;
};

}  // namespace pulsered
