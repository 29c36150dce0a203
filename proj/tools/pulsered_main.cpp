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

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "pulsered_cli/commands.hpp"

int main(int argc, char** argv) {
  using pulsered::FormationMode;
  using namespace pulsered::cli;

  CLI::App app{"Stochastic simulator of conscious and ready brain pulses"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::string config;
  std::string out;
  std::string guard;
  std::string formation;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  const std::map<std::string, bool> guard_map{{"on", true}, {"off", false}};
  const std::map<std::string, FormationMode> formation_map{
      {"instant", FormationMode::Instantaneous}, {"staged", FormationMode::Staged}};

  auto add_common = [&](CLI::App* cmd, bool config_required) {
    auto* c = cmd->add_option("--config", config, "Scenario config (verify: file or directory)")
                  ->envname("PULSERED_CONFIG");
    if (config_required) c->required();
    cmd->add_option("--seed", seed, "Override the config seed")->envname("PULSERED_SEED");
    cmd->add_option("--out", out, "Output directory")->envname("PULSERED_OUT");
    cmd->add_option("--guard", guard, "Rule-4 guard")
        ->check(CLI::IsMember({"on", "off"}))
        ->envname("PULSERED_GUARD");
    cmd->add_option("--formation", formation, "Pulse formation after a stochastic choice")
        ->check(CLI::IsMember({"instant", "staged"}))
        ->envname("PULSERED_FORMATION");
    cmd->add_flag("--overwrite", manifest.overwrite, "Allow a non-empty output directory");
    cmd->add_option("--test-site-bias", manifest.test_site_bias, "Test hook: tilt site selection")
        ->group("");
    cmd->add_flag("--test-tamper-phantom", manifest.test_tamper_phantom,
                  "Test hook: perturb a phantom coefficient")
        ->group("");
  };

  auto* run = app.add_subcommand("run", "Run one trajectory and write its trace");
  add_common(run, true);
  auto* mc = app.add_subcommand("montecarlo", "Run a Monte Carlo batch against closed forms");
  add_common(mc, true);
  mc->add_option("--trials", trials, "Number of trials")->envname("PULSERED_TRIALS");
  mc->add_option("--threads", manifest.threads, "Worker threads (0: all cores)")
      ->envname("PULSERED_THREADS");
  auto* verify = app.add_subcommand("verify", "Run the invariant suite over bundled configs");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  manifest.config_path = config;
  manifest.out_dir = out;
  auto given = [](CLI::App* cmd, const char* name) { return cmd->count(name) > 0; };
  CLI::App* active = app.get_subcommands().front();
  if (given(active, "--seed") || std::getenv("PULSERED_SEED")) manifest.seed = seed;
  if (active == mc && (given(mc, "--trials") || std::getenv("PULSERED_TRIALS"))) manifest.trials = trials;
  if (!guard.empty()) manifest.guard = guard_map.at(guard);
  if (!formation.empty()) manifest.formation = formation_map.at(formation);

  if (active == run) return cmd_run(manifest, std::cout, std::cerr);
  if (active == mc) return cmd_montecarlo(manifest, std::cout, std::cerr);
  return cmd_verify(manifest, std::cout, std::cerr);
}
