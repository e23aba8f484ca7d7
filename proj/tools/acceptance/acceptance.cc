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

#include "acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "biphoton/biphoton_spectrum.h"
#include "biphoton/coincidence.h"
#include "biphoton/phase_lock.h"
#include "biphoton/polarization_optics.h"
#include "biphoton/tomography.h"

namespace biphoton::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;

Row row(int c, std::string quantity, std::string reference, double value, std::string tol,
        bool pass) {
  return {c, std::move(quantity), std::move(reference), value, std::move(tol), pass, false};
}

Row info_row(int c, std::string quantity, std::string reference, double value) {
  return {c, std::move(quantity), std::move(reference), value, "-", true, true};
}

std::vector<double> scan_angles() {
  std::vector<double> a;
  for (int i = 0; i < 16; ++i) a.push_back(i * kPi / 16);
  return a;
}

Matrix4c sqrt_psd(const Matrix4c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double uhlmann_fidelity(const Matrix4c& rho, const Matrix4c& sigma) {
  const Matrix4c s = sqrt_psd(rho);
  Matrix4c inner = s * sigma * s;
  inner = (inner + inner.adjoint()) / 2.0;
  const double t = sqrt_psd(inner).trace().real();
  return t * t;
}

/// Ginibre state of the given rank.
Matrix4c random_state(std::mt19937_64& rng, int rank) {
  std::normal_distribution<double> n;
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> g(4, rank);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < rank; ++c) g(r, c) = Complex(n(rng), n(rng));
  const Matrix4c rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

const char* title(int criterion) {
  static const char* const kTitles[kCriteria] = {
      "Cauchy-Schwarz arithmetic",
      "End-to-end g2 reproduction",
      "Bell-state table",
      "Lock ratio and set-point linearity",
      "Coherence-time calibration",
      "Tomography round trip",
      "Printed density-matrix fixtures",
      "Visibility chain",
      "Brightness accounting",
      "Property suite",
  };
  return criterion >= 1 && criterion <= kCriteria ? kTitles[criterion - 1] : "?";
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

bool all_pass(const std::vector<Row>& rows, int criterion) {
  bool any = false;
  for (const Row& r : rows) {
    if (r.criterion != criterion) continue;
    any = true;
    if (!r.pass) return false;
  }
  return any;
}

std::vector<Row> cauchy_schwarz_rows() {
  const double a = cauchy_schwarz_factor(35.0, 2.0, 2.0);
  const double b = cauchy_schwarz_factor(10.0, 2.0, 2.0);
  return {row(1, "CS factor (35, 2, 2)", "306.25", a, "exact", a == 306.25),
          row(1, "CS factor (10, 2, 2)", "25", b, "exact", b == 25.0)};
}

G2Summary run_g2(double duration_s, std::uint64_t seed) {
  const ExperimentScenario sc = reference_scenario(duration_s, seed);
  const GeneratedStreams g = generate_timetags(sc);
  const CoincidenceHistogram h =
      cross_correlation(g.stokes, g.anti_stokes, 1, -200, 1000, sc.duration_s);
  const G2Peak p = g2_peak(h);
  return {duration_s, p.value, p.tau_ns,
          window_g2(g.stokes, g.anti_stokes, 0, 300, sc.duration_s)};
}

std::vector<Row> g2_rows(const G2Summary& s, bool info) {
  const std::string at = " (" + format_value(s.duration_s) + " s)";
  if (info) {
    return {info_row(2, "peak g2" + at, "35", s.peak),
            info_row(2, "300 ns window g2" + at, "10", s.window),
            info_row(2, "peak delay ns" + at, "25", s.peak_tau_ns)};
  }
  return {row(2, "peak g2" + at, "35", s.peak, "15%", std::abs(s.peak / 35.0 - 1.0) <= 0.15),
          row(2, "300 ns window g2" + at, "10", s.window, "15%",
              std::abs(s.window / 10.0 - 1.0) <= 0.15),
          row(2, "peak delay ns" + at, "25", s.peak_tau_ns, "10 ns",
              std::abs(s.peak_tau_ns - 25.0) <= 10.0)};
}

std::vector<Row> bell_table_rows() {
  std::vector<Row> out;
  for (BellKind k : kAllBellKinds) {
    const TwoPathState s = two_path_state(bell_path_config(k));
    const Vector4c a = s.state.amplitudes();
    const Vector4c b = bell_state(k).amplitudes();
    const Complex ip = b.dot(a);
    const Vector4c aligned = a * (std::abs(ip) > 0 ? std::conj(ip) / std::abs(ip) : Complex(1.0));
    const double err = (aligned - b).cwiseAbs().maxCoeff();
    out.push_back(row(3, to_string(k) + " amplitude error", "0", err, "1e-12",
                      err <= 1e-12 && !s.warning));
  }
  return out;
}

LockSummary run_lock() {
  const std::vector<double> targets = {0.0, kPi / 3, 2 * kPi / 3, kPi};
  const LockCalibration cal = calibrate_setpoints(InterferometerGeometry{}, targets);
  return {lock_ratio(780e-9, 795e-9, 795e-9), cal.fit.r_squared};
}

std::vector<Row> lock_rows(const LockSummary& s) {
  return {row(4, "lock ratio (780, 795, 795 nm)", "1.009615", s.ratio, "1e-6",
              std::abs(s.ratio - 1.009615) <= 1e-6),
          row(4, "four-setpoint affine R2", "> 0.9999", s.r_squared, "-", s.r_squared > 0.9999)};
}

std::vector<Row> coherence_rows() {
  std::vector<Row> out;
  const PowerLaw law = anchor_power_law();
  out.push_back(row(5, "power-law exponent b", "0.402", law.b, "0.001",
                    std::abs(law.b - 0.402) <= 0.001));
  const FrequencyGrid grid = FrequencyGrid::standard();
  for (auto [power, tau] : {std::pair{2.0, 300.0}, std::pair{0.13, 900.0}}) {
    SpectralModelParams p;
    p.coupling_power_mw = power;
    const double tc = coherence_time(model_waveform(p, grid));
    const double tbp = spectral_fwhm_hz(spectrum(p, grid)) * tc * 1e-9;
    const std::string mw = " at " + format_value(power) + " mW";
    out.push_back(row(5, "coherence time ns" + mw, format_value(tau), tc, "5%",
                      std::abs(tc / tau - 1.0) <= 0.05));
    out.push_back(row(5, "bandwidth-time product" + mw, power > 1 ? "0.87" : "0.72", tbp,
                      "[0.3, 1.2]", tbp >= 0.3 && tbp <= 1.2));
  }
  return out;
}

std::vector<Row> tomography_rows(int states, std::uint64_t seed, bool timed) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProjectionSet set = standard_projection_set();
  std::mt19937_64 rng(seed);
  std::vector<double> infid;
  bool physical = true;
  for (int i = 0; i < states; ++i) {
    const Matrix4c truth = random_state(rng, 1 + i % 4);
    const auto counts = expected_counts(DensityMatrix::unchecked(truth), set, 1e6);
    const ReconstructionResult r = mle_reconstruct(counts, set);
    physical = physical && r.rho.diagnostics().physical();
    infid.push_back(1.0 - uhlmann_fidelity(truth, r.rho.matrix()));
  }
  std::sort(infid.begin(), infid.end());
  const double median = infid.empty() ? 1.0 : infid[infid.size() / 2];
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<Row> out = {
      row(6, "median infidelity, " + std::to_string(states) + " states, N = 1e6", "< 1e-3",
          median, "-", median < 1e-3),
      row(6, "outputs PSD with unit trace", "1", physical ? 1.0 : 0.0, "all", physical)};
  if (timed) out.push_back(row(6, "runtime s", "< 120", secs, "-", secs < 120.0));
  return out;
}

std::vector<FixtureSummary> run_fixtures() {
  std::vector<FixtureSummary> out;
  for (BellKind k : kAllBellKinds) {
    const PrintedFixture fx = load_printed_fixture(k);
    out.push_back({k, fixture_chsh(fx), fx.reported_chsh,
                   fidelity(fx.density(), bell_state(k), InputPolicy::kIngested).prob});
  }
  return out;
}

std::vector<Row> fixture_rows(const std::vector<FixtureSummary>& fixtures) {
  std::vector<Row> out;
  for (const FixtureSummary& f : fixtures) {
    out.push_back(row(7, to_string(f.kind) + " Horodecki S", format_value(f.reported_chsh),
                      f.chsh, "S >= 2, 0.2",
                      f.chsh >= 2.0 && std::abs(f.chsh - f.reported_chsh) <= 0.2));
    if (f.kind == BellKind::kPsiPlus) {
      out.push_back(row(7, "PsiPlus f_prob (quoted 0.936 not asserted)", "0.811",
                        f.fidelity_prob, "0.005", std::abs(f.fidelity_prob - 0.811) <= 0.005));
    }
  }
  if (fixtures.size() != kAllBellKinds.size()) {
    out.push_back(row(7, "fixtures present", "4", static_cast<double>(fixtures.size()), "all",
                      false));
  }
  return out;
}

std::vector<Row> visibility_rows() {
  std::vector<Row> out;
  const double v10 = visibility_from_g2(10.0);
  out.push_back(row(8, "visibility_from_g2(10)", "9/11", v10, "exact", v10 == 9.0 / 11.0));
  const double g = g2_from_visibility(1.0 / std::sqrt(2.0));
  out.push_back(row(8, "g2 at V = 1/sqrt(2)", "5.828", g, "0.001", std::abs(g - 5.828) <= 0.001));
  const auto angles = scan_angles();

  ExperimentScenario pure;
  pure.waveform = rise_decay_waveform(50.0, 25.0);
  pure.pair_rate = 1e5;  // 10^5 pairs per setting at 10 % duty over 10 s
  pure.duration_s = 10.0;
  pure.seed = 11;
  const double vp = fringe_scan(pure, 0.0, angles).visibility;
  out.push_back(row(8, "pure PsiPlus fringe V", "> 0.99", vp, "-", vp > 0.99));

  const ExperimentScenario noisy =
      with_leakage_for_visibility(reference_scenario(20.0, 3), 0.893, 0.0, angles);
  const double vn = fringe_scan(noisy, 0.0, angles).visibility;
  out.push_back(row(8, "noise-calibrated fringe V", "0.893", vn, "0.03",
                    std::abs(vn - 0.893) <= 0.03));

  LockSimulation sim;
  sim.controller.proportional_gain = 0.0;
  sim.controller.integral_gain = 0.0;
  sim.drift.step_std_rad = 0.5;
  sim.steps = 20000;
  sim.approx_tolerance = 1e-2;
  const double coherence = visibility_penalty(simulate_lock(sim));
  ExperimentScenario unlocked = pure;
  unlocked.pair_rate = 9800.0;
  unlocked.duration_s = 20.0;
  unlocked.seed = 17;
  unlocked.state = two_path_density(bell_path_config(BellKind::kPsiPlus), coherence);
  const double vu = fringe_scan(unlocked, -kPi / 4, angles).visibility;
  out.push_back(row(8, "unlocked-phase fringe V at -45 deg", "< 0.05", vu, "-", vu < 0.05));
  return out;
}

std::vector<Row> brightness_rows() {
  const ChannelEfficiency arm;
  const double detected = 9800.0 * arm.product() * arm.product() * 0.1;
  const BrightnessReport r = brightness_report(detected, arm, arm, 0.1, 2.9, 0.016);
  return {row(9, "spectral brightness /s/MHz", "3400", r.spectral_brightness, "1%",
              std::abs(r.spectral_brightness / 3400.0 - 1.0) <= 0.01 &&
                  std::abs(r.spectral_brightness - 3379.0) < 1.0),
          row(9, "normalized brightness /s/MHz/mW", "213000", r.normalized_brightness, "1.5%",
              std::abs(r.normalized_brightness / 213000.0 - 1.0) <= 0.015)};
}

std::vector<Row> property_rows() {
  std::vector<Row> out;
  {
    const ExperimentScenario sc = reference_scenario(2.0, 9);
    const GeneratedStreams a = generate_timetags(sc), b = generate_timetags(sc);
    const bool same_tags = a.stokes.times_ns == b.stokes.times_ns &&
                           a.anti_stokes.times_ns == b.anti_stokes.times_ns;
    const ProjectionSet set = standard_projection_set();
    const auto n = sample_counts(
        expected_counts(DensityMatrix::pure(bell_state(BellKind::kPhiMinus)), set, 500.0), 4);
    const bool same_fit =
        mle_reconstruct(n, set).rho.matrix() == mle_reconstruct(n, set).rho.matrix();
    out.push_back(row(10, "repeat with same seed is identical", "1",
                      same_tags && same_fit ? 1.0 : 0.0, "exact", same_tags && same_fit));
  }
  {
    const ProjectionSet set = standard_projection_set();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    int bad = 0;
    for (int i = 0; i < 20; ++i) {
      std::vector<double> counts(16);
      for (double& c : counts) c = std::floor(u(rng));
      if (!mle_reconstruct(counts, set).rho.diagnostics().physical()) ++bad;
    }
    out.push_back(row(10, "unphysical MLE outputs on arbitrary counts", "0", bad, "exact",
                      bad == 0));
  }
  {
    const FrequencyGrid grid = FrequencyGrid::standard();
    const BiphotonSpectrum spec = spectrum(SpectralModelParams{}, grid);
    const TemporalWaveform wf = inverse_transform(spec);
    double freq = 0.0, time = 0.0;
    for (const Complex& c : spec.amplitude) freq += std::norm(c) * grid.step / (2 * kPi);
    for (const Complex& c : wf.samples) time += std::norm(c) * wf.step_ns * 1e-9;
    const double err = std::abs(time / freq - 1.0);
    out.push_back(row(10, "Parseval relative error", "0", err, "1e-9", err <= 1e-9));
  }
  {
    const double dur = 20.0;
    const TimeTagStream s1 = generate_poisson_stream(Channel::kStokes, 20000.0, dur, 21);
    const TimeTagStream s2 = generate_poisson_stream(Channel::kAntiStokes, 20000.0, dur, 22);
    const CoincidenceHistogram h = cross_correlation(s1, s2, 100, -5000, 5000, dur);
    const double sigma = 1.0 / std::sqrt(h.accidental_level());
    double worst = 0.0;
    for (double g : h.g2) worst = std::max(worst, std::abs(g - 1.0) / sigma);
    out.push_back(row(10, "uncorrelated g2 max deviation (sigma)", "0", worst, "5", worst <= 5.0));
  }
  return out;
}

std::vector<Row> run_criterion(int criterion) {
  switch (criterion) {
    case 1: return cauchy_schwarz_rows();
    case 2: {
      std::vector<Row> rows = g2_rows(run_g2(1000.0, 1));
      const std::vector<Row> short_run = g2_rows(run_g2(50.0, 1), true);
      rows.insert(rows.end(), short_run.begin(), short_run.end());
      return rows;
    }
    case 3: return bell_table_rows();
    case 4: return lock_rows(run_lock());
    case 5: return coherence_rows();
    case 6: return tomography_rows();
    case 7: return fixture_rows(run_fixtures());
    case 8: return visibility_rows();
    case 9: return brightness_rows();
    case 10: return property_rows();
  }
  return {};
}

}  // namespace biphoton::acceptance
