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

// biphoton-bench: simulate, analyze, tomo, lock, report.
//
// Exit codes: 0 ok, 1 internal error, 2 config or usage, 3 stream I/O,
// 4 tomography input, 5 missing artifacts.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acceptance.h"
#include "biphoton/biphoton_spectrum.h"
#include "biphoton/coincidence.h"
#include "biphoton/formats.h"
#include "biphoton/phase_lock.h"
#include "biphoton/quantum_core.h"
#include "biphoton/tomography.h"
#include "config.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace biphoton;
using namespace biphoton::cli;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitStream = 3;
constexpr int kExitTomography = 4;
constexpr int kExitMissing = 5;

constexpr const char* kOutDirEnv = "BIPHOTON_OUT_DIR";

struct ExitError {
  int code;
  std::string message;
};

struct Common {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg;
  try {
    cfg = c.config_path.empty() ? default_config() : load_config(c.config_path);
  } catch (const ConfigError& e) {
    throw ExitError{kExitConfig, e.what()};
  }
  if (c.seed) apply_seed(cfg, *c.seed);
  return cfg;
}

fs::path output_dir(const Common& c, const std::optional<std::string>& from_config) {
  fs::path dir;
  if (!c.out_dir.empty()) {
    dir = c.out_dir;
  } else if (from_config) {
    dir = *from_config;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    dir = env;
  } else {
    dir = "biphoton-out";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ExitError{kExitInternal, "cannot create '" + dir.string() + "': " + ec.message()};
  return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExitError{kExitInternal, "cannot write '" + path.string() + "'"};
  writer(out);
  if (!out) throw ExitError{kExitInternal, "write failed for '" + path.string() + "'"};
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ExitError{kExitMissing, "missing artifact '" + path.string() + "'"};
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ExitError{kExitMissing, "unreadable artifact '" + path.string() + "': " + e.what()};
  }
}

json interval_json(const Interval& i) {
  return {{"mean", i.mean}, {"std", i.std}, {"lo", i.lo}, {"hi", i.hi}};
}

std::string lower_name(BellKind k) {
  switch (k) {
    case BellKind::kPsiPlus: return "psi_plus";
    case BellKind::kPsiMinus: return "psi_minus";
    case BellKind::kPhiPlus: return "phi_plus";
    case BellKind::kPhiMinus: return "phi_minus";
  }
  return "?";
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  bool csv = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const ScenarioConfig cfg = load(a.common);
  const fs::path dir = output_dir(a.common, cfg.output_dir);
  const ExperimentScenario& sc = cfg.scenario;
  GeneratedStreams g;
  try {
    g = generate_timetags(sc);
  } catch (const ValidationError& e) {
    throw ExitError{kExitConfig, std::string("config: scenario: ") + e.what()};
  }
  const std::array<TimeTagStream, 2> streams = {g.stokes, g.anti_stokes};
  write_file(dir / "timetags.bin", [&](std::ostream& os) { write_timetags_binary(os, streams); });
  json files = {"timetags.bin"};
  if (a.csv || cfg.write_csv) {
    write_file(dir / "timetags.csv", [&](std::ostream& os) { write_timetags_csv(os, streams); });
    files.push_back("timetags.csv");
  }
  write_file(dir / "waveform.csv", [&](std::ostream& os) { write_waveform_csv(os, sc.waveform); });
  files.push_back("waveform.csv");

  const double expected_pairs = sc.pair_rate * sc.duty_cycle * sc.duration_s;
  json summary = {
      {"schema", kSchemaVersion},
      {"seed", sc.seed},
      {"duration_s", sc.duration_s},
      {"pair_rate", sc.pair_rate},
      {"leakage_pair_rate", sc.leakage_pair_rate},
      {"duty_cycle", sc.duty_cycle},
      {"background_rate_stokes", sc.background_rate_stokes},
      {"background_rate_anti_stokes", sc.background_rate_anti_stokes},
      {"efficiency_stokes", sc.efficiency_stokes.product()},
      {"efficiency_anti_stokes", sc.efficiency_anti_stokes.product()},
      {"expected_generated_pairs", expected_pairs},
      {"generated_pairs", g.generated_pairs},
      {"generated_leakage_pairs", g.generated_leakage_pairs},
      {"expected_peak_g2", expected_peak_g2(sc)},
      {"singles",
       {{"stokes", g.stokes.times_ns.size()},
        {"anti_stokes", g.anti_stokes.times_ns.size()},
        {"stokes_rate", static_cast<double>(g.stokes.times_ns.size()) / sc.duration_s},
        {"anti_stokes_rate", static_cast<double>(g.anti_stokes.times_ns.size()) / sc.duration_s}}},
      {"files", files},
  };
  write_json(dir / "simulate_summary.json", summary);
  std::cout << "simulate: " << g.generated_pairs << " pairs, " << g.stokes.times_ns.size() << " + "
            << g.anti_stokes.times_ns.size() << " tags -> " << dir.string() << "\n";
  return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
  Common common;
  std::vector<std::string> streams;
  std::int64_t bin_ns = 1;
  std::vector<std::int64_t> range_ns = {-200, 1000};
  std::int64_t window_ns = 300;
  std::int64_t window_start_ns = 0;
  std::int64_t auto_bin_ns = 20;
  double assume_auto = 2.0;
  double duration_s = 0.0;
};

std::array<TimeTagStream, 2> read_streams(const std::vector<std::string>& paths) {
  std::array<TimeTagStream, 2> out = {TimeTagStream{Channel::kStokes, {}},
                                      TimeTagStream{Channel::kAntiStokes, {}}};
  std::array<int, 2> owner = {-1, -1};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::ifstream in(paths[i], std::ios::binary);
    if (!in) throw ExitError{kExitStream, "cannot read stream file '" + paths[i] + "'"};
    std::array<TimeTagStream, 2> got;
    try {
      got = fs::path(paths[i]).extension() == ".csv" ? read_timetags_csv(in)
                                                     : read_timetags_binary(in);
    } catch (const FormatError& e) {
      throw ExitError{kExitStream, paths[i] + ": " + e.what()};
    }
    for (int c = 0; c < 2; ++c) {
      if (got[c].times_ns.empty()) continue;
      if (owner[c] >= 0) {
        throw ExitError{kExitStream, "channel " + std::to_string(c) + " appears in both '" +
                                         paths[owner[c]] + "' and '" + paths[i] + "'"};
      }
      owner[c] = static_cast<int>(i);
      out[c].times_ns = std::move(got[c].times_ns);
    }
  }
  for (int c = 0; c < 2; ++c) {
    if (out[c].times_ns.empty()) {
      throw ExitError{kExitStream, "no events on channel " + std::to_string(c)};
    }
  }
  return out;
}

int cmd_analyze(const AnalyzeArgs& a) {
  if (a.bin_ns <= 0 || a.window_ns <= 0 || a.auto_bin_ns <= 0 || a.range_ns.size() != 2 ||
      a.range_ns[0] >= a.range_ns[1] || !(a.assume_auto > 0.0) || a.duration_s < 0.0) {
    throw ExitError{kExitConfig, "analyze: bins, window and assumed autocorrelation must be > 0 "
                                 "and the range must be increasing"};
  }
  const fs::path dir = output_dir(a.common, std::nullopt);
  const auto streams = read_streams(a.streams);
  const TimeTagStream& s = streams[0];
  const TimeTagStream& as = streams[1];

  CoincidenceHistogram h;
  double win = 0.0;
  AutoCorrelation auto_s, auto_as;
  try {
    h = cross_correlation(s, as, a.bin_ns, a.range_ns[0], a.range_ns[1], a.duration_s);
    win = window_g2(s, as, a.window_start_ns, a.window_ns, a.duration_s);
    auto_s = auto_correlation(s, a.auto_bin_ns, 7, a.duration_s);
    auto_as = auto_correlation(as, a.auto_bin_ns, 7, a.duration_s);
  } catch (const ValidationError& e) {
    throw ExitError{kExitStream, std::string("analyze: ") + e.what()};
  }
  const G2Peak peak = g2_peak(h);
  const auto auto_json = [](const AutoCorrelation& c) {
    return json{{"g2", c.g2},
                {"sigma", c.sigma},
                {"coincidences", c.coincidences},
                {"low_statistics", c.low_statistics}};
  };
  const double measured_cs = auto_s.g2 > 0.0 && auto_as.g2 > 0.0
                                 ? cauchy_schwarz_factor(peak.value, auto_s.g2, auto_as.g2)
                                 : 0.0;
  json stats = {
      {"schema", kSchemaVersion},
      {"streams", a.streams},
      {"duration_s", h.duration_s},
      {"singles", {{"stokes", s.times_ns.size()}, {"anti_stokes", as.times_ns.size()}}},
      {"bin_ns", a.bin_ns},
      {"range_ns", a.range_ns},
      {"accidental_level", h.accidental_level()},
      {"peak", {{"g2", peak.value}, {"tau_ns", peak.tau_ns}}},
      {"window", {{"start_ns", a.window_start_ns}, {"width_ns", a.window_ns}, {"g2", win}}},
      {"auto", {{"bin_ns", a.auto_bin_ns}, {"stokes", auto_json(auto_s)},
                {"anti_stokes", auto_json(auto_as)}}},
      {"cauchy_schwarz",
       {{"measured_autos", measured_cs},
        {"assumed_auto", a.assume_auto},
        {"assumed_autos", cauchy_schwarz_factor(peak.value, a.assume_auto, a.assume_auto)},
        {"window_assumed_autos", cauchy_schwarz_factor(win, a.assume_auto, a.assume_auto)}}},
      {"visibility", {{"from_window_g2", visibility_from_g2(win)},
                      {"from_peak_g2", visibility_from_g2(peak.value)}}},
  };
  write_file(dir / "histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, h); });
  write_json(dir / "analyze_stats.json", stats);
  std::printf("analyze: peak g2 %.3f at %.1f ns, %lld ns window g2 %.3f, CS (autos %.2f) %.2f\n",
              peak.value, peak.tau_ns, static_cast<long long>(a.window_ns), win, a.assume_auto,
              cauchy_schwarz_factor(peak.value, a.assume_auto, a.assume_auto));
  return 0;
}

// -------------------------------------------------------------------- tomo

struct TomoArgs {
  Common common;
  std::string counts_path;
  std::string fixture;
  std::string target;
  std::optional<int> resamples;
};

json fixture_entry(const PrintedFixture& fx) {
  const DensityMatrix physical = nearest_physical(fx.canonical);
  const Fidelity f = fidelity(fx.density(), bell_state(fx.kind), InputPolicy::kIngested);
  return {
      {"name", lower_name(fx.kind)},
      {"reported_chsh", fx.reported_chsh},
      {"chsh_horodecki", fixture_chsh(fx)},
      {"chsh_canonical_settings", chsh_value(physical, canonical_chsh_settings(fx.kind))},
      {"fidelity", {{"prob", f.prob}, {"sqrt", f.sqrt}}},
      {"purity", fx.diagnostics.purity},
      {"min_eigenvalue", fx.diagnostics.min_eigenvalue},
      {"trace_residual", fx.diagnostics.trace_residual},
      {"bell_pair_overlap", bell_pair_overlap(fx.canonical, fx.kind)},
  };
}

int run_fixtures(const TomoArgs& a, const fs::path& dir) {
  std::vector<BellKind> kinds;
  if (a.fixture == "all") {
    kinds.assign(kAllBellKinds.begin(), kAllBellKinds.end());
  } else {
    try {
      kinds.push_back(parse_bell_kind(a.fixture));
    } catch (const ValidationError& e) {
      throw ExitError{kExitTomography, e.what()};
    }
  }
  json entries = json::array();
  for (BellKind k : kinds) {
    PrintedFixture fx;
    try {
      fx = load_printed_fixture(k);
    } catch (const std::exception& e) {
      throw ExitError{kExitTomography, e.what()};
    }
    write_file(dir / ("density_" + lower_name(k) + ".json"),
               [&](std::ostream& os) { os << density_to_json(fx.canonical) << '\n'; });
    entries.push_back(fixture_entry(fx));
    std::printf("fixture %s: S = %.3f (reported %.2f)\n", lower_name(k).c_str(),
                entries.back()["chsh_horodecki"].get<double>(), fx.reported_chsh);
  }
  write_json(dir / "fixtures_report.json", {{"schema", kSchemaVersion}, {"fixtures", entries}});
  return 0;
}

int cmd_tomo(const TomoArgs& a) {
  if (!a.fixture.empty() && !a.counts_path.empty()) {
    throw ExitError{kExitConfig, "tomo: --fixture and --counts are exclusive"};
  }
  ScenarioConfig cfg = load(a.common);
  const fs::path dir = output_dir(a.common, cfg.output_dir);
  if (!a.fixture.empty()) return run_fixtures(a, dir);

  TomographyOptions& opt = cfg.tomography;
  if (!a.target.empty()) {
    try {
      opt.target = parse_bell_kind(a.target);
    } catch (const ValidationError& e) {
      throw ExitError{kExitConfig, std::string("tomo: --target: ") + e.what()};
    }
  }
  if (a.resamples) opt.bootstrap_resamples = *a.resamples;

  ProjectionSet set;
  std::vector<double> counts;
  std::string source;
  if (!a.counts_path.empty()) {
    std::ifstream in(a.counts_path);
    if (!in) throw ExitError{kExitTomography, "cannot read counts file '" + a.counts_path + "'"};
    try {
      CountsTable t = read_counts_csv(in);
      set = std::move(t.set);
      counts = std::move(t.counts);
    } catch (const std::exception& e) {
      throw ExitError{kExitTomography, a.counts_path + ": " + e.what()};
    }
    source = a.counts_path;
  } else {
    set = standard_projection_set();
    if (opt.source == TomographyOptions::Source::kIdeal) {
      counts = expected_counts(cfg.scenario.state, set, opt.intensity);
      if (opt.sample) counts = sample_counts(counts, cfg.seed);
      source = "ideal";
    } else {
      counts = simulate_tomography_counts(cfg.scenario, set, opt.window).counts;
      source = "scenario";
    }
    write_file(dir / "counts.csv", [&](std::ostream& os) { write_counts_csv(os, set, counts); });
  }
  try {
    set.validate();
  } catch (const ValidationError& e) {
    throw ExitError{kExitTomography, std::string("tomo: ") + e.what()};
  }

  ReconstructionResult fit;
  try {
    fit = mle_reconstruct(counts, set, opt.mle);
  } catch (const ValidationError& e) {
    throw ExitError{kExitTomography, std::string("tomo: ") + e.what()};
  }
  const TwoQubitState target = bell_state(opt.target);
  const Fidelity f = fidelity(fit.rho, target);
  json report = {
      {"schema", kSchemaVersion},
      {"source", source},
      {"target", lower_name(opt.target)},
      {"fidelity", {{"prob", f.prob}, {"sqrt", f.sqrt}}},
      {"chsh", {{"horodecki", chsh_max(fit.rho).s},
                {"canonical_settings", chsh_value(fit.rho, canonical_chsh_settings(opt.target))}}},
      {"purity", purity(fit.rho)},
      {"mle", {{"likelihood", to_string(opt.mle.likelihood)},
               {"converged", fit.converged},
               {"iterations", fit.iterations},
               {"negative_log_likelihood", fit.negative_log_likelihood},
               {"intensity", fit.intensity}}},
      {"counts", counts},
  };
  if (opt.bootstrap_resamples > 0) {
    const BootstrapSummary b =
        bootstrap(fit, set, opt.mle, opt.target, opt.bootstrap_resamples, cfg.seed);
    report["bootstrap"] = {{"resamples", b.resamples},
                           {"fidelity", interval_json(b.fidelity)},
                           {"chsh", interval_json(b.chsh)},
                           {"purity", interval_json(b.purity)}};
  }
  write_file(dir / "density.json",
             [&](std::ostream& os) { os << density_to_json(fit.rho.matrix()) << '\n'; });
  write_json(dir / "tomo_report.json", report);
  std::printf("tomo: fidelity %.4f, S %.3f, purity %.4f\n", f.prob,
              report["chsh"]["horodecki"].get<double>(), report["purity"].get<double>());
  return 0;
}

// -------------------------------------------------------------------- lock

int cmd_lock(const Common& c) {
  const ScenarioConfig cfg = load(c);
  const fs::path dir = output_dir(c, cfg.output_dir);
  const LockSimulation& sim = cfg.lock.simulation;
  PhaseTrace trace;
  LockCalibration cal;
  try {
    trace = simulate_lock(sim);
    cal = calibrate_setpoints(sim.geometry, cfg.lock.setpoints);
  } catch (const ValidationError& e) {
    throw ExitError{kExitConfig, std::string("config: lock: ") + e.what()};
  }
  json rows = json::array();
  for (const LockTableRow& r : cal.rows) {
    rows.push_back({{"target_phase_rad", r.target_phase},
                    {"lock_setpoint_rad", r.lock_setpoint},
                    {"fringe_phase_rad", r.fringe_phase}});
  }
  const double penalty = visibility_penalty(trace);
  json report = {
      {"schema", kSchemaVersion},
      {"seed", sim.drift.seed},
      {"steps", sim.steps},
      {"lock_ratio", lock_ratio(sim.geometry)},
      {"sfwm_offset_rad", sfwm_offset(sim.geometry)},
      {"target_phase_rad", trace.target_phase},
      {"residual_rms_rad", trace.residual_rms},
      {"max_approx_error_rad", trace.max_approx_error},
      {"visibility_penalty", penalty},
      {"calibration", {{"slope", cal.fit.slope},
                       {"intercept", cal.fit.intercept},
                       {"r_squared", cal.fit.r_squared},
                       {"rows", rows}}},
  };
  write_file(dir / "phase_trace.csv", [&](std::ostream& os) { write_phase_trace_csv(os, trace); });
  write_json(dir / "lock_report.json", report);
  std::printf("lock: ratio %.7f, residual %.4f rad, penalty %.4f, R2 %.8f\n",
              report["lock_ratio"].get<double>(), trace.residual_rms, penalty, cal.fit.r_squared);
  return 0;
}

// ------------------------------------------------------------------ report

namespace acc = biphoton::acceptance;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

int cmd_report(const std::string& artifact_dir, const Common& c) {
  const fs::path in = artifact_dir.empty() ? output_dir(c, std::nullopt) : fs::path(artifact_dir);
  const std::vector<std::string> needed = {"analyze_stats.json", "lock_report.json",
                                           "fixtures_report.json"};
  std::vector<std::string> missing;
  for (const std::string& f : needed) {
    if (!fs::exists(in / f)) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string msg = "report: missing artifacts in '" + in.string() + "':";
    for (const std::string& m : missing) msg += "\n  " + m;
    throw ExitError{kExitMissing, msg};
  }
  const json stats = read_json(in / "analyze_stats.json");
  const json lock = read_json(in / "lock_report.json");
  const json fixtures = read_json(in / "fixtures_report.json");

  std::vector<acc::Row> rows;
  const auto add = [&rows](std::vector<acc::Row> r) { rows.insert(rows.end(), r.begin(), r.end()); };
  try {
    add(acc::cauchy_schwarz_rows());
    acc::G2Summary g2;
    g2.duration_s = stats.at("duration_s").get<double>();
    g2.peak = stats.at("peak").at("g2").get<double>();
    g2.peak_tau_ns = stats.at("peak").at("tau_ns").get<double>();
    g2.window = stats.at("window").at("g2").get<double>();
    add(acc::g2_rows(g2));
    rows.push_back({2, "CS factor from analyzed peak, assumed autos", "306",
                    stats.at("cauchy_schwarz").at("assumed_autos").get<double>(), "-", true, true});
    add(acc::bell_table_rows());
    add(acc::lock_rows({lock.at("lock_ratio").get<double>(),
                        lock.at("calibration").at("r_squared").get<double>()}));
    add(acc::coherence_rows());
    add(acc::tomography_rows(100, 2026, false));
    std::vector<acc::FixtureSummary> fx;
    for (const json& e : fixtures.at("fixtures")) {
      fx.push_back({parse_bell_kind(e.at("name").get<std::string>()),
                    e.at("chsh_horodecki").get<double>(), e.at("reported_chsh").get<double>(),
                    e.at("fidelity").at("prob").get<double>()});
    }
    add(acc::fixture_rows(fx));
    add(acc::visibility_rows());
    rows.push_back({8, "visibility from analyzed window g2", "9/11",
                    stats.at("visibility").at("from_window_g2").get<double>(), "-", true, true});
    add(acc::brightness_rows());
    add(acc::property_rows());
  } catch (const json::exception& e) {
    throw ExitError{kExitMissing, std::string("report: malformed artifact: ") + e.what()};
  }
  if (fs::exists(in / "tomo_report.json")) {
    const json tomo = read_json(in / "tomo_report.json");
    if (tomo.contains("fidelity")) {
      rows.push_back({6, "tomo fidelity (" + tomo.value("source", std::string("?")) + ")", "-",
                      tomo["fidelity"].value("prob", 0.0), "-", true, true});
    }
  }

  const fs::path out = c.out_dir.empty() ? in : output_dir(c, std::nullopt);
  int passed = 0;
  std::ostringstream md, csv;
  md << "# Acceptance report\n";
  csv << "criterion,quantity,reference,computed,tolerance,result\n";
  for (int k = 1; k <= acc::kCriteria; ++k) {
    const bool ok = acc::all_pass(rows, k);
    passed += ok ? 1 : 0;
    md << "\n## " << k << ". " << acc::title(k) << " (" << (ok ? "PASS" : "FAIL") << ")\n\n"
       << "| quantity | reference | computed | tolerance | result |\n"
       << "|---|---|---|---|---|\n";
    for (const acc::Row& r : rows) {
      if (r.criterion != k) continue;
      const char* result = r.info ? "info" : (r.pass ? "pass" : "FAIL");
      md << "| " << r.quantity << " | " << r.reference << " | " << acc::format_value(r.value)
         << " | " << r.tolerance << " | " << result << " |\n";
      csv << k << ',' << csv_field(r.quantity) << ',' << csv_field(r.reference) << ','
          << acc::format_value(r.value) << ',' << csv_field(r.tolerance) << ',' << result << '\n';
    }
  }
  md << "\n" << passed << "/" << acc::kCriteria << " criteria pass.\n";
  write_file(out / "report.md", [&](std::ostream& os) { os << md.str(); });
  write_file(out / "report.csv", [&](std::ostream& os) { os << csv.str(); });
  std::printf("report: %d/%d criteria pass -> %s\n", passed, acc::kCriteria,
              (out / "report.md").string().c_str());
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool with_config = true) {
  if (with_config) sub->add_option("config", c.config_path, "YAML scenario config");
  sub->add_option("-o,--out", c.out_dir,
                  std::string("output directory (default: config, then $") + kOutDirEnv +
                      ", then ./biphoton-out)");
  sub->add_option("--seed", c.seed, "override every seed in the config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"biphoton-bench: entangled biphoton source simulation and analysis"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic time tags");
  add_common(simulate, sim.common);
  simulate->add_flag("--csv", sim.csv, "also write timetags.csv");

  AnalyzeArgs an;
  CLI::App* analyze = app.add_subcommand("analyze", "g2 histogram and statistics from time tags");
  analyze->add_option("streams", an.streams, "time-tag files (.bin or .csv)")
      ->required()
      ->expected(1, 2);
  analyze->add_option("-o,--out", an.common.out_dir, "output directory");
  analyze->add_option("--bin-ns", an.bin_ns, "histogram bin width")->capture_default_str();
  analyze->add_option("--range-ns", an.range_ns, "histogram delay range MIN MAX")
      ->expected(2)
      ->capture_default_str();
  analyze->add_option("--window-ns", an.window_ns, "single-bin window width")->capture_default_str();
  analyze->add_option("--window-start-ns", an.window_start_ns, "window start")->capture_default_str();
  analyze->add_option("--auto-bin-ns", an.auto_bin_ns, "autocorrelation bin")->capture_default_str();
  analyze->add_option("--assume-auto", an.assume_auto,
                      "autocorrelation assumed for the Cauchy-Schwarz factor")
      ->capture_default_str();
  analyze->add_option("--duration-s", an.duration_s, "acquisition time; 0 infers it from the tags");

  TomoArgs tomo;
  CLI::App* tomo_cmd = app.add_subcommand("tomo", "16-setting tomography and reconstruction");
  add_common(tomo_cmd, tomo.common);
  tomo_cmd->add_option("--counts", tomo.counts_path, "counts CSV to reconstruct");
  tomo_cmd->add_option("--fixture", tomo.fixture, "printed density matrix: name or 'all'");
  tomo_cmd->add_option("--target", tomo.target, "Bell state for fidelity and CHSH settings");
  tomo_cmd->add_option("--resamples", tomo.resamples, "bootstrap resamples (0 disables)");

  Common lock;
  CLI::App* lock_cmd = app.add_subcommand("lock", "phase-lock simulation and set-point table");
  add_common(lock_cmd, lock);

  Common rep;
  std::string artifact_dir;
  CLI::App* report = app.add_subcommand("report", "acceptance tables from prior outputs");
  report->add_option("artifacts", artifact_dir, "directory holding command outputs");
  report->add_option("-o,--out", rep.out_dir, "where to write report.md and report.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*analyze) return cmd_analyze(an);
    if (*tomo_cmd) return cmd_tomo(tomo);
    if (*lock_cmd) return cmd_lock(lock);
    if (*report) return cmd_report(artifact_dir, rep);
  } catch (const ExitError& e) {
    std::cerr << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
