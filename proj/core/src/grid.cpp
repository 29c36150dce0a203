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

#include "pulsered/grid.hpp"

#include <cmath>
#include <string>

#include "pulsered/error.hpp"

namespace pulsered {

BrainGrid::BrainGrid(std::size_t n_points, double spacing, double origin)
    : n_points_(n_points), spacing_(spacing), origin_(origin) {
  if (n_points < kMinPoints) {
    throw Error(Errc::InvalidGrid, "n_points must be >= " + std::to_string(kMinPoints) +
                                       ", got " + std::to_string(n_points));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(Errc::InvalidGrid, "spacing must be positive and finite");
  }
  if (!std::isfinite(origin)) {
    throw Error(Errc::InvalidGrid, "origin must be finite");
  }
}

std::size_t BrainGrid::nearest_index(double u) const noexcept {
  const double x = std::floor((u - origin_) / spacing_ + 0.5);
  if (!(x > 0.0)) return 0;
  if (x >= static_cast<double>(n_points_ - 1)) return n_points_ - 1;
  return static_cast<std::size_t>(x);
}

}  // namespace pulsered
