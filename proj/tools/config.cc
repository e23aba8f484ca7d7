// Copyright 2026 The biphoton-bench Authors
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

#include "config.h"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace biphoton::cli {

namespace {

std::string where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  return m.line >= 0 ? " (line " + std::to_string(m.line + 1) + ")" : "";
}

/// One mapping in the document. Every key must be read before finish().
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError("config: '" + name() + "' must be a mapping" + where(node_));
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const YAML::Node v = node_[key];
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("config: field '" + field(key) + "' has the wrong type" + where(v));
    }
  }

  double positive(const std::string& key, double fallback) {
    double v = fallback;
    read(key, v);
    if (!(v > 0.0)) throw ConfigError("config: field '" + field(key) + "' must be > 0");
    return v;
  }

  Section child(const std::string& key) {
    has(key);
    return Section(node_ ? node_[key] : YAML::Node(), field(key));
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) {
        throw ConfigError("config: unknown key '" + field(key) + "'" + where(kv.first));
      }
    }
  }

 private:
  std::string name() const { return path_.empty() ? "<root>" : path_; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Runs `fn`, rewording library validation failures as config errors on `field`.
template <typename Fn>
void guarded(const std::string& field, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ConfigError("config: field '" + field + "': " + e.what());
  }
}

BellKind read_bell(Section& s, const std::string& key, BellKind fallback) {
  std::string name = to_string(fallback);
  s.read(key, name);
  BellKind k = fallback;
  guarded(s.field(key), [&] { k = parse_bell_kind(name); });
  return k;
}

void read_efficiency(Section s, ChannelEfficiency& e) {
  s.read("fiber", e.fiber);
  s.read("filter", e.filter);
  s.read("detector", e.detector);
  s.finish();
}

std::optional<AnalyzerSetting> read_analyzer(Section& parent, const std::string& key) {
  if (!parent.has(key)) return std::nullopt;
  Section s = parent.child(key);
  AnalyzerSetting a;
  s.read("qwp_deg", a.qwp_deg);
  s.read("hwp_deg", a.hwp_deg);
  std::string port = "transmit";
  s.read("port", port);
  if (port == "reflect") {
    a.port = PbsPort::kReflect;
  } else if (port != "transmit") {
    throw ConfigError("config: field '" + s.field("port") + "' must be transmit or reflect");
  }
  s.finish();
  return a;
}

void read_scenario(Section s, ScenarioConfig& cfg) {
  std::string preset = "reference";
  s.read("preset", preset);
  const double duration = s.positive("duration_s", 1000.0);
  ExperimentScenario& sc = cfg.scenario;
  if (preset == "reference") {
    ReferenceTargets t;
    Section ts = s.child("targets");
    ts.read("peak_g2", t.peak_g2);
    ts.read("window_g2", t.window_g2);
    ts.read("window_ns", t.window_ns);
    ts.read("rise_ns", t.rise_ns);
    ts.finish();
    guarded(s.field("targets"), [&] { sc = reference_scenario(duration, cfg.seed, t); });
  } else if (preset == "custom") {
    if (s.has("targets")) {
      throw ConfigError("config: field '" + s.field("targets") + "' needs preset: reference");
    }
    sc = ExperimentScenario{};
    sc.duration_s = duration;
    sc.seed = cfg.seed;
    sc.waveform = rise_decay_waveform(50.0, 25.0);
  } else {
    throw ConfigError("config: field '" + s.field("preset") + "' must be reference or custom");
  }

  if (s.has("waveform")) {
    Section w = s.child("waveform");
    std::string kind = "rise_decay";
    w.read("kind", kind);
    if (kind == "rise_decay") {
      const double decay = w.positive("decay_ns", 50.0);
      double rise = 25.0;
      w.read("rise_ns", rise);
      guarded(w.field("rise_ns"), [&] { sc.waveform = rise_decay_waveform(decay, rise); });
    } else if (kind == "model") {
      guarded(w.field("kind"), [&] {
        sc.waveform = model_waveform(cfg.spectral, FrequencyGrid::standard());
      });
    } else {
      throw ConfigError("config: field '" + w.field("kind") + "' must be rise_decay or model");
    }
    w.finish();
  }
  if (s.has("state")) {
    Section st = s.child("state");
    const BellKind k = read_bell(st, "bell", BellKind::kPsiPlus);
    double coherence = 1.0;
    st.read("coherence", coherence);
    st.finish();
    guarded(st.field("coherence"), [&] {
      sc.state = two_path_density(bell_path_config(k), coherence);
    });
  }
  s.read("pair_rate", sc.pair_rate);
  s.read("leakage_pair_rate", sc.leakage_pair_rate);
  s.read("background_rate_stokes", sc.background_rate_stokes);
  s.read("background_rate_anti_stokes", sc.background_rate_anti_stokes);
  s.read("duty_cycle", sc.duty_cycle);
  if (s.has("efficiency_stokes")) read_efficiency(s.child("efficiency_stokes"), sc.efficiency_stokes);
  if (s.has("efficiency_anti_stokes")) {
    read_efficiency(s.child("efficiency_anti_stokes"), sc.efficiency_anti_stokes);
  }
  if (auto a = read_analyzer(s, "analyzer_stokes")) sc.analyzer_stokes = a;
  if (auto a = read_analyzer(s, "analyzer_anti_stokes")) sc.analyzer_anti_stokes = a;
  std::size_t max_events = sc.max_events;
  s.read("max_events", max_events);
  sc.max_events = max_events;
  s.finish();
  guarded("scenario", [&] { sc.validate(); });
}

void read_lock(Section s, LockOptions& lock) {
  LockSimulation& sim = lock.simulation;
  if (s.has("geometry")) {
    Section g = s.child("geometry");
    InterferometerGeometry& geo = sim.geometry;
    g.read("coupling_arm1_m", geo.coupling_arm1_m);
    g.read("coupling_arm2_m", geo.coupling_arm2_m);
    g.read("pump_arm1_m", geo.pump_arm1_m);
    g.read("pump_arm2_m", geo.pump_arm2_m);
    for (auto [key, target] : {std::pair{"pump_wavelength_nm", &geo.pump_wavelength_m},
                               std::pair{"coupling_wavelength_nm", &geo.coupling_wavelength_m},
                               std::pair{"lock_wavelength_nm", &geo.lock_wavelength_m}}) {
      double nm = 0.0;
      if (g.has(key)) {
        g.read(key, nm);
        *target = nm * 1e-9;
      }
    }
    g.read("reference_offset_rad", geo.reference_offset_rad);
    g.finish();
    guarded(s.field("geometry"), [&] { geo.validate(); });
  }
  if (s.has("drift")) {
    Section d = s.child("drift");
    d.read("step_std_rad", sim.drift.step_std_rad);
    sim.drift.step_interval_ms = d.positive("step_interval_ms", sim.drift.step_interval_ms);
    d.finish();
    if (!(sim.drift.step_std_rad >= 0.0)) {
      throw ConfigError("config: field '" + d.field("step_std_rad") + "' must be >= 0");
    }
  }
  if (s.has("controller")) {
    Section c = s.child("controller");
    c.read("proportional_gain", sim.controller.proportional_gain);
    c.read("integral_gain", sim.controller.integral_gain);
    c.read("actuation_limit_rad", sim.controller.actuation_limit_rad);
    c.read("setpoint_rad", sim.controller.setpoint_rad);
    c.finish();
  }
  s.read("steps", sim.steps);
  sim.approx_tolerance = s.positive("approx_tolerance", sim.approx_tolerance);
  s.read("setpoints_rad", lock.setpoints);
  s.finish();
  if (sim.steps == 0) throw ConfigError("config: field 'lock.steps' must be > 0");
  if (lock.setpoints.size() < 2) {
    throw ConfigError("config: field 'lock.setpoints_rad' needs at least two entries");
  }
}

void read_tomography(Section s, TomographyOptions& t) {
  std::string source = "scenario";
  s.read("source", source);
  if (source == "ideal") {
    t.source = TomographyOptions::Source::kIdeal;
  } else if (source != "scenario") {
    throw ConfigError("config: field '" + s.field("source") + "' must be scenario or ideal");
  }
  t.intensity = s.positive("intensity", t.intensity);
  s.read("sample", t.sample);
  t.target = read_bell(s, "target", t.target);
  std::string likelihood = to_string(t.mle.likelihood);
  s.read("likelihood", likelihood);
  guarded(s.field("likelihood"), [&] { t.mle.likelihood = parse_likelihood(likelihood); });
  s.read("restarts", t.mle.restarts);
  s.read("max_iterations", t.mle.max_iterations);
  s.read("bootstrap_resamples", t.bootstrap_resamples);
  s.read("window_start_ns", t.window.start_ns);
  s.read("window_ns", t.window.width_ns);
  s.finish();
  guarded("tomography", [&] { t.mle.validate(); });
  if (t.bootstrap_resamples < 0) {
    throw ConfigError("config: field 'tomography.bootstrap_resamples' must be >= 0");
  }
  if (t.window.width_ns <= 0) throw ConfigError("config: field 'tomography.window_ns' must be > 0");
}

}  // namespace

ScenarioConfig default_config() { return parse_config("schema: 1\n"); }

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  Section top(root, "");
  if (!top.has("schema")) throw ConfigError("config: missing required field 'schema'");
  int schema = 0;
  top.read("schema", schema);
  if (schema != kSchemaVersion) {
    throw ConfigError("config: field 'schema' is " + std::to_string(schema) +
                      ", this build reads schema " + std::to_string(kSchemaVersion));
  }

  ScenarioConfig cfg;
  cfg.lock.setpoints = {0.0, std::numbers::pi / 3, 2 * std::numbers::pi / 3, std::numbers::pi};
  top.read("seed", cfg.seed);
  if (top.has("output_dir")) {
    std::string dir;
    top.read("output_dir", dir);
    cfg.output_dir = dir;
  }
  top.read("write_csv", cfg.write_csv);
  // spectral first: a model waveform in the scenario depends on it.
  {
    Section sp = top.child("spectral");
    SpectralModelParams& p = cfg.spectral;
    sp.read("optical_depth", p.optical_depth);
    sp.read("medium_length_m", p.medium_length_m);
    sp.read("coupling_power_mw", p.coupling_power_mw);
    sp.read("pump_detuning_mhz", p.pump_detuning_mhz);
    sp.read("dephasing_mhz", p.dephasing_mhz);
    sp.read("group_delay_scale", p.group_delay_scale);
    sp.read("rise_time_ns", p.rise_time_ns);
    sp.finish();
    guarded("spectral", [&] { p.validate(); });
  }
  read_scenario(top.child("scenario"), cfg);
  read_lock(top.child("lock"), cfg.lock);
  read_tomography(top.child("tomography"), cfg.tomography);
  top.finish();
  apply_seed(cfg, cfg.seed);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_seed(ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.scenario.seed = seed;
  cfg.lock.simulation.drift.seed = seed;
  cfg.tomography.mle.seed = seed;
}

}  // namespace biphoton::cli
