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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pulsered/dynamics.hpp"

namespace pulsered::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitRuntime = 2,
  kExitStatistics = 3,
};

struct RunManifest {
  std::filesystem::path config_path;  // file; verify also accepts a directory
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::filesystem::path out_dir;  // empty: write nothing
  std::optional<bool> guard;
  std::optional<FormationMode> formation;
  bool emit_trajectory = true;
  bool emit_events = true;
  bool emit_summary = true;
  bool overwrite = false;
  unsigned threads = 0;

  // Test hooks.
  double test_site_bias = 0.0;
  bool test_tamper_phantom = false;
};

/// One trajectory: trajectory.csv, events.json, summary.json, manifest.json.
int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Monte Carlo batch: report.json, manifest.json. Exit 3 on a failed comparison.
int cmd_montecarlo(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Invariant suite over one config or every *.yaml in a directory: verify.json.
int cmd_verify(const RunManifest& manifest, std::ostream& out, std::ostream& err);

}  // namespace pulsered::cli
