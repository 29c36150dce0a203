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

#include "pulsered_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pulsered/config.hpp"
#include "pulsered/error.hpp"
#include "pulsered/invariants.hpp"
#include "pulsered/montecarlo.hpp"
#include "pulsered/scenarios.hpp"
#include "pulsered_cli/serialize.hpp"

#ifndef PULSERED_CONFIG_DIR
#define PULSERED_CONFIG_DIR "configs"
#endif

namespace pulsered::cli {

namespace fs = std::filesystem;

namespace {

int exit_for(const Error& e) {
  switch (e.code()) {
    case Errc::ConfigError:
    case Errc::InvalidArgument:
    case Errc::InvalidGrid:
    case Errc::GridTooCoarse:
    case Errc::CenterOutOfRange:
    case Errc::ResolutionTooCoarse:
    case Errc::StepTooCoarse:
    case Errc::NonpositiveS:
    case Errc::TooFewTrials:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

ScenarioConfig resolve(const fs::path& path, const RunManifest& m) {
  ScenarioConfig cfg = load_config(path);
  if (m.seed) cfg.seed = *m.seed;
  if (m.trials) cfg.trials = *m.trials;
  if (m.guard) cfg.guard = *m.guard;
  if (m.formation) cfg.formation.mode = *m.formation;
  return cfg;
}

void prepare_out_dir(const RunManifest& m) {
  if (m.out_dir.empty()) return;
  if (fs::exists(m.out_dir)) {
    if (!fs::is_directory(m.out_dir)) {
      throw Error(Errc::ConfigError, "output path " + m.out_dir.string() + " is not a directory");
    }
    if (!fs::is_empty(m.out_dir) && !m.overwrite) {
      throw Error(Errc::ConfigError,
                  "output directory " + m.out_dir.string() + " is not empty (pass --overwrite)");
    }
  } else {
    fs::create_directories(m.out_dir);
  }
}

void write_file(const RunManifest& m, const std::string& name, const std::string& text) {
  if (m.out_dir.empty()) return;
  std::ofstream out(m.out_dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::ConfigError, "cannot write " + (m.out_dir / name).string());
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json manifest_json(const RunManifest& m, const std::string& command, const Json& config) {
  Json j{{"command", command},
         {"config_path", m.config_path.string()},
         {"seed", m.seed ? Json(*m.seed) : Json(nullptr)},
         {"n_trials", m.trials ? Json(*m.trials) : Json(nullptr)},
         {"out_dir", m.out_dir.string()},
         {"emit", {{"trajectory", m.emit_trajectory}, {"events", m.emit_events}, {"summary", m.emit_summary}}},
         {"guard", m.guard ? Json(*m.guard ? "on" : "off") : Json(nullptr)},
         {"formation", m.formation ? Json(*m.formation == FormationMode::Staged ? "staged" : "instant")
                                   : Json(nullptr)},
         {"overwrite", m.overwrite},
         {"threads", m.threads}};
  if (m.test_site_bias != 0.0 || m.test_tamper_phantom) {
    j["test_hooks"] = {{"site_bias", m.test_site_bias}, {"tamper_phantom", m.test_tamper_phantom}};
  }
  j["resolved_config"] = config;
  j["timestamp"] = utc_timestamp();
  return j;
}

void report_breaches(const InvariantMonitor& monitor, std::ostream& err) {
  for (const auto& c : monitor.checks()) {
    if (!c.passed) err << "invariant breach: " << c.name << ": " << c.detail << "\n";
  }
}

RunOptions run_options(const RunManifest& m, InvariantMonitor* monitor) {
  RunOptions options;
  options.sampler.site_bias = m.test_site_bias;
  options.tamper_phantom = m.test_tamper_phantom;
  options.record_trajectory = true;
  options.monitor = monitor;
  return options;
}

std::string trajectory_text(const ScenarioRun& run) {
  std::ostringstream csv;
  write_trajectory_csv(csv, run.trajectory);
  return csv.str();
}

Json summary_json(const ScenarioRun& run, const ScenarioConfig& cfg, const InvariantMonitor& monitor) {
  return Json{{"scenario", std::string(to_string(run.name))},
              {"seed", run.seed},
              {"trial", run.trial},
              {"events", run.events.size()},
              {"summary", to_json(run.summary)},
              {"invariants", to_json(monitor.checks())},
              {"invariants_pass", monitor.passed()},
              {"config", to_json(cfg)}};
}

std::vector<fs::path> verify_targets(const RunManifest& m) {
  const fs::path root = m.config_path.empty() ? fs::path(PULSERED_CONFIG_DIR) : m.config_path;
  if (!fs::is_directory(root)) return {root};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".yaml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(Errc::ConfigError, "no *.yaml configs in " + root.string());
  return files;
}

}  // namespace

int cmd_run(const RunManifest& m, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = resolve(m.config_path, m);
    prepare_out_dir(m);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  }

  InvariantMonitor monitor;
  ScenarioRun run;
  try {
    run = run_scenario(cfg, run_options(m, &monitor));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    try {
      write_file(m, "manifest.json", dump(manifest_json(m, "run", to_json(cfg))));
    } catch (const Error&) {
    }
    return exit_for(e);
  }

  try {
    if (m.emit_trajectory) write_file(m, "trajectory.csv", trajectory_text(run));
    if (m.emit_events) write_file(m, "events.json", dump(events_json(run)));
    if (m.emit_summary) write_file(m, "summary.json", dump(summary_json(run, cfg, monitor)));
    write_file(m, "manifest.json", dump(manifest_json(m, "run", to_json(cfg))));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  }

  out << to_string(run.name) << " seed=" << run.seed << ": " << run.events.size()
      << " reduction event(s), " << run.trajectory.size() << " samples\n";
  if (!monitor.passed()) {
    report_breaches(monitor, err);
    return kExitRuntime;
  }
  out << "invariants: pass\n";
  return kExitOk;
}

int cmd_montecarlo(const RunManifest& m, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  MonteCarloResult result;
  try {
    cfg = resolve(m.config_path, m);
    prepare_out_dir(m);
    result = run_montecarlo(cfg, cfg.trials, SamplerOptions{m.test_site_bias}, m.threads);
    write_file(m, "report.json", dump(to_json(result)));
    write_file(m, "manifest.json", dump(manifest_json(m, "montecarlo", to_json(cfg))));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  }

  out << to_string(cfg.name) << " seed=" << cfg.seed << " trials=" << result.trials
      << " hits=" << result.hits << "\n";
  auto line = [&](std::ostream& os, const NamedComparison& c) {
    os << "  " << (c.report.pass ? "pass" : "FAIL") << " " << c.name
       << ": empirical=" << c.report.empirical << " closed_form=" << c.report.closed_form
       << " z=" << c.report.z_score << "\n";
  };
  for (const auto& c : result.comparisons) line(out, c);
  if (result.histogram) {
    out << "  " << (result.histogram->pass ? "pass" : "FAIL")
        << " site_histogram: chi2=" << result.histogram->chi_square
        << " dof=" << result.histogram->dof << " p=" << result.histogram->p_value << "\n";
  }
  if (!result.pass()) {
    err << "statistical failure:\n";
    for (const auto& c : result.comparisons) {
      if (!c.report.pass) line(err, c);
    }
    if (result.histogram && !result.histogram->pass) {
      err << "  FAIL site_histogram: p=" << result.histogram->p_value << "\n";
    }
    return kExitStatistics;
  }
  return kExitOk;
}

int cmd_verify(const RunManifest& m, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> targets;
  try {
    targets = verify_targets(m);
    prepare_out_dir(m);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }

  Json configs = Json::array();
  std::vector<std::pair<std::string, bool>> overall;
  auto tally = [&](const std::string& name, bool ok) {
    auto it = std::find_if(overall.begin(), overall.end(), [&](const auto& p) { return p.first == name; });
    if (it == overall.end()) {
      overall.emplace_back(name, ok);
    } else {
      it->second = it->second && ok;
    }
  };
  bool all_ok = true;

  for (const auto& path : targets) {
    Json entry{{"config", path.string()}};
    try {
      const ScenarioConfig cfg = resolve(path, m);
      entry["scenario"] = std::string(to_string(cfg.name));
      InvariantMonitor monitor;
      const ScenarioRun first = run_scenario(cfg, run_options(m, &monitor));
      const ScenarioRun second = run_scenario(cfg, run_options(m, nullptr));
      const bool identical = dump(events_json(first)) == dump(events_json(second)) &&
                             dump(to_json(first.summary)) == dump(to_json(second.summary)) &&
                             trajectory_text(first) == trajectory_text(second);
      monitor.on_determinism(identical, "repeat run with the same seed produced different output");
      entry["invariants"] = to_json(monitor.checks());
      entry["pass"] = monitor.passed();
      for (const auto& c : monitor.checks()) tally(c.name, c.passed);
      if (!monitor.passed()) {
        all_ok = false;
        err << path.string() << ":\n";
        report_breaches(monitor, err);
      }
      out << (monitor.passed() ? "pass " : "FAIL ") << path.filename().string() << "\n";
    } catch (const Error& e) {
      all_ok = false;
      entry["pass"] = false;
      entry["error"] = std::string(to_string(e.code()));
      entry["detail"] = e.what();
      err << path.string() << ": error: " << e.what() << "\n";
      out << "FAIL " << path.filename().string() << " (" << to_string(e.code()) << ")\n";
    }
    configs.push_back(std::move(entry));
  }

  Json invariants = Json::object();
  for (const auto& [name, ok] : overall) invariants[name] = ok;
  const Json report{{"pass", all_ok}, {"invariants", invariants}, {"configs", configs}};
  try {
    write_file(m, "verify.json", dump(report));
    write_file(m, "manifest.json", dump(manifest_json(m, "verify", Json(nullptr))));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  for (const auto& [name, ok] : overall) out << "  " << (ok ? "pass " : "FAIL ") << name << "\n";
  return all_ok ? kExitOk : kExitRuntime;
}

}  // namespace pulsered::cli
