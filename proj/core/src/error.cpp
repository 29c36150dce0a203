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

#include "pulsered/error.hpp"

namespace pulsered {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::CenterOutOfRange: return "CenterOutOfRange";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::PhantomTransfer: return "PhantomTransfer";
    case Errc::Rule4Violation: return "Rule4Violation";
    case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case Errc::StepTooCoarse: return "StepTooCoarse";
    case Errc::NotPostReduction: return "NotPostReduction";
    case Errc::NotFullyFormed: return "NotFullyFormed";
    case Errc::ZeroWeightSite: return "ZeroWeightSite";
    case Errc::InvalidHitTarget: return "InvalidHitTarget";
    case Errc::NonpositiveS: return "NonpositiveS";
    case Errc::TooFewTrials: return "TooFewTrials";
    case Errc::TooFewEvents: return "TooFewEvents";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InvariantBreach: return "InvariantBreach";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace pulsered
