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

#include "pulsered/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pulsered/error.hpp"

namespace pulsered {

std::string_view to_string(ScenarioName name) noexcept {
  switch (name) {
    case ScenarioName::Interaction: return "interaction";
    case ScenarioName::UnresolvableObservation: return "unresolvable_observation";
    case ScenarioName::TurnOff: return "turn_off";
    case ScenarioName::Disengage: return "disengage";
    case ScenarioName::PulseDrift: return "pulse_drift";
    case ScenarioName::FadeIn: return "fade_in";
  }
  return "unknown";
}

std::optional<ScenarioName> scenario_from_string(std::string_view text) noexcept {
  for (auto name : {ScenarioName::Interaction, ScenarioName::UnresolvableObservation,
                    ScenarioName::TurnOff, ScenarioName::Disengage, ScenarioName::PulseDrift,
                    ScenarioName::FadeIn}) {
    if (to_string(name) == text) return name;
  }
  return std::nullopt;
}

FormationPolicy ScenarioConfig::formation_policy() const {
  FormationPolicy policy = formation;
  if (policy.tau <= 0.0) policy.tau = 10.0 * dt;
  return policy;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::ConfigError, what); };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(ramp.t_end > ramp.t_start) || ramp.t_start < 0.0) fail("ramp needs 0 <= t_start < t_end");
  if (ramp.kind != RampKind::Hold && dt > (ramp.t_end - ramp.t_start) / 100.0 * (1.0 + 1e-12)) {
    fail("dt must not exceed 1/100 of the ramp span");
  }
  if (!(ramp.final_fraction >= 0.0 && ramp.final_fraction <= 1.0)) {
    fail("ramp.final_fraction must lie in [0, 1]");
  }
  const bool observation_family = name == ScenarioName::UnresolvableObservation ||
                                  name == ScenarioName::TurnOff || name == ScenarioName::Disengage;
  if (observation_family) {
    if (a1 == 0.0 && a2 == 0.0) fail("amplitudes a1 and a2 are both zero");
    if (ramp.final_fraction != 1.0) {
      fail(std::string(to_string(name)) + " needs a completed observation (final_fraction 1)");
    }
  }
  if (name == ScenarioName::Interaction || name == ScenarioName::FadeIn) {
    if (a1 == 0.0) fail("interaction needs a nonzero initial amplitude a1");
  }
  if (name == ScenarioName::FadeIn && formation.mode != FormationMode::Staged) {
    fail("fade_in needs formation.mode staged");
  }
  if (name == ScenarioName::PulseDrift && !shadow_ready) fail("pulse_drift needs drift.shadow_ready");
  if (feed_rate < 0.0) fail("drift.feed_rate must be >= 0");
  if (t_off_delay < 0.0 || t_dis_delay < 0.0) fail("delays must be >= 0");
}

namespace {

using Handler = std::function<void(const YAML::Node&, const std::string&)>;
using Section = std::map<std::string, Handler>;

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
  throw Error(Errc::ConfigError, "bad value for '" + key + "': " + why);
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) bad_value(key, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    bad_value(key, e.what());
  }
}

void walk(const YAML::Node& node, const Section& section, const std::string& prefix) {
  if (!node.IsMap()) {
    throw Error(Errc::ConfigError, "'" + (prefix.empty() ? std::string("<root>") : prefix) +
                                       "' must be a mapping");
  }
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    auto it = section.find(key);
    if (it == section.end()) throw Error(Errc::ConfigError, "unknown key '" + path + "'");
    it->second(kv.second, path);
  }
}

Handler number(double& out) {
  return [&out](const YAML::Node& n, const std::string& k) { out = scalar<double>(n, k); };
}

Handler count(std::size_t& out) {
  return [&out](const YAML::Node& n, const std::string& k) {
    const auto v = scalar<long long>(n, k);
    if (v < 0) bad_value(k, "must be >= 0");
    out = static_cast<std::size_t>(v);
  };
}

Handler flag(bool& out) {
  return [&out](const YAML::Node& n, const std::string& k) { out = scalar<bool>(n, k); };
}

Handler nested(Section section) {
  return [section = std::move(section)](const YAML::Node& n, const std::string& k) {
    walk(n, section, k);
  };
}

Handler pulse(PulseSpec& spec) {
  return nested({{"center", number(spec.center)}, {"sigma", number(spec.sigma)}});
}

}  // namespace

ScenarioConfig parse_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ConfigError, std::string("malformed YAML: ") + e.what());
  }

  ScenarioConfig cfg;
  bool have_name = false;
  const Section top{
      {"scenario",
       [&](const YAML::Node& n, const std::string& k) {
         const auto text = scalar<std::string>(n, k);
         const auto name = scenario_from_string(text);
         if (!name) bad_value(k, "unknown scenario '" + text + "'");
         cfg.name = *name;
         have_name = true;
       }},
      {"seed",
       [&](const YAML::Node& n, const std::string& k) { cfg.seed = scalar<std::uint64_t>(n, k); }},
      {"dt", number(cfg.dt)},
      {"observer",
       [&](const YAML::Node& n, const std::string& k) { cfg.observer = scalar<std::uint32_t>(n, k); }},
      {"guard", flag(cfg.guard)},
      {"grid", nested({{"n_points", count(cfg.grid_points)},
                       {"spacing", number(cfg.grid_spacing)},
                       {"origin", number(cfg.grid_origin)}})},
      {"amplitudes", nested({{"a1", number(cfg.a1)}, {"a2", number(cfg.a2)}})},
      {"pulses", nested({{"conscious", pulse(cfg.conscious)},
                         {"ready_1", pulse(cfg.ready_1)},
                         {"ready_2", pulse(cfg.ready_2)}})},
      {"ramp", nested({{"kind",
                        [&](const YAML::Node& n, const std::string& k) {
                          const auto text = scalar<std::string>(n, k);
                          if (text == "trig") cfg.ramp.kind = RampKind::TrigRamp;
                          else if (text == "linear") cfg.ramp.kind = RampKind::LinearRamp;
                          else if (text == "hold") cfg.ramp.kind = RampKind::Hold;
                          else bad_value(k, "expected trig, linear or hold");
                        }},
                       {"t_start", number(cfg.ramp.t_start)},
                       {"t_end", number(cfg.ramp.t_end)},
                       {"final_fraction", number(cfg.ramp.final_fraction)}})},
      {"formation", nested({{"mode",
                             [&](const YAML::Node& n, const std::string& k) {
                               const auto text = scalar<std::string>(n, k);
                               if (text == "instant") cfg.formation.mode = FormationMode::Instantaneous;
                               else if (text == "staged") cfg.formation.mode = FormationMode::Staged;
                               else bad_value(k, "expected instant or staged");
                             }},
                            {"tau", number(cfg.formation.tau)},
                            {"target_sigma", number(cfg.formation.target_sigma)},
                            {"neighbor_radius", count(cfg.formation.neighbor_radius)},
                            {"steps", count(cfg.formation_steps)}})},
      {"variant", nested({{"single_state_x", flag(cfg.single_state_x)}})},
      {"turn_off", nested({{"delay", number(cfg.t_off_delay)}})},
      {"disengage", nested({{"delay", number(cfg.t_dis_delay)}, {"hold_steps", count(cfg.hold_steps)}})},
      {"drift", nested({{"velocity", number(cfg.drift_velocity)},
                        {"steps", count(cfg.drift_steps)},
                        {"feed_rate", number(cfg.feed_rate)},
                        {"shadow_ready", flag(cfg.shadow_ready)},
                        {"intra_ready_transfer", flag(cfg.intra_ready_transfer)}})},
      {"montecarlo", nested({{"trials", count(cfg.trials)}})},
  };
  walk(root, top, "");
  if (!have_name) throw Error(Errc::ConfigError, "missing key 'scenario'");
  try {
    (void)cfg.grid();
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, std::string("grid: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace pulsered
