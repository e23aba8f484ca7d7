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

#include "biphoton/coincidence.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "biphoton/phase_lock.h"

namespace biphoton {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> scan_angles() {
  std::vector<double> a;
  for (int i = 0; i < 16; ++i) a.push_back(i * kPi / 16);
  return a;
}

ExperimentScenario quiet_scenario(double duration_s, std::uint64_t seed) {
  ExperimentScenario sc;
  sc.waveform = rise_decay_waveform(50.0, 25.0);
  sc.duration_s = duration_s;
  sc.seed = seed;
  return sc;
}

TEST(Generate, BackgroundOnlyCountsArePoisson) {
  ExperimentScenario sc = quiet_scenario(2.0, 5);
  sc.pair_rate = 0.0;
  sc.background_rate_stokes = 20000.0;
  sc.background_rate_anti_stokes = 5000.0;
  const GeneratedStreams g = generate_timetags(sc);
  const double ns = 40000.0, nas = 10000.0;
  EXPECT_NEAR(g.stokes.times_ns.size(), ns, 5 * std::sqrt(ns));
  EXPECT_NEAR(g.anti_stokes.times_ns.size(), nas, 5 * std::sqrt(nas));
  EXPECT_EQ(g.generated_pairs, 0u);
}

TEST(Generate, Deterministic) {
  const ExperimentScenario sc = reference_scenario(0.5, 42);
  const GeneratedStreams a = generate_timetags(sc), b = generate_timetags(sc);
  EXPECT_EQ(a.stokes.times_ns, b.stokes.times_ns);
  EXPECT_EQ(a.anti_stokes.times_ns, b.anti_stokes.times_ns);
  ExperimentScenario other = sc;
  other.seed = 43;
  EXPECT_NE(generate_timetags(other).stokes.times_ns, a.stokes.times_ns);
}

TEST(Generate, SortedIntegerNanoseconds) {
  const GeneratedStreams g = generate_timetags(reference_scenario(0.3, 1));
  EXPECT_NO_THROW(g.stokes.validate());
  EXPECT_NO_THROW(g.anti_stokes.validate());
  EXPECT_TRUE(std::is_sorted(g.stokes.times_ns.begin(), g.stokes.times_ns.end()));
  EXPECT_LT(g.stokes.times_ns.back(), 300'000'000);
}

TEST(Generate, MemoryCap) {
  ExperimentScenario sc = quiet_scenario(10.0, 1);
  sc.background_rate_stokes = 1e6;
  sc.max_events = 1000;
  EXPECT_THROW(generate_timetags(sc), ValidationError);
}

TEST(Generate, PairBudget) {
  const ExperimentScenario sc = reference_scenario(20.0, 9);
  const GeneratedStreams g = generate_timetags(sc);
  const double mean = sc.pair_rate * sc.duty_cycle * sc.duration_s;
  EXPECT_NEAR(static_cast<double>(g.generated_pairs), mean, 5 * std::sqrt(mean));
}

TEST(Generate, DelayHistogramFollowsWaveform) {
  // Unit efficiencies, no background: the tau histogram is |psi|^2. Two-sample
  // Kolmogorov-Smirnov against delays drawn directly from the waveform CDF.
  ExperimentScenario sc = quiet_scenario(1.0, 3);
  sc.efficiency_stokes = {1.0, 1.0, 1.0};
  sc.efficiency_anti_stokes = {1.0, 1.0, 1.0};
  sc.pair_rate = 20000.0;
  sc.duty_cycle = 1.0;
  const GeneratedStreams g = generate_timetags(sc);
  const CoincidenceHistogram h = cross_correlation(g.stokes, g.anti_stokes, 1, -50, 500, 1.0);

  std::vector<double> model(h.counts.size(), 0.0);
  for (std::size_t i = 0; i < sc.waveform.samples.size(); ++i) {
    const double t = sc.waveform.time_ns(i);
    const auto bin = static_cast<std::ptrdiff_t>(std::floor(t)) + 50;
    if (bin >= 0 && bin < static_cast<std::ptrdiff_t>(model.size())) {
      model[bin] += std::norm(sc.waveform.samples[i]);
    }
  }
  const double total_model = std::accumulate(model.begin(), model.end(), 0.0);
  const double total = static_cast<double>(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}));
  double cm = 0.0, cd = 0.0, d = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    cm += model[i] / total_model;
    cd += static_cast<double>(h.counts[i]) / total;
    d = std::max(d, std::abs(cm - cd));
  }
  // Critical value at p = 0.01 is 1.63 / sqrt(n); quantization shifts the
  // sampled delays by at most one bin, allowed for by the model binning.
  EXPECT_LT(d, 1.63 / std::sqrt(total) + 0.01);
  EXPECT_GT(total, 15000.0);
}

TEST(Correlation, UncorrelatedStreamsGiveUnity) {
  const TimeTagStream a = generate_poisson_stream(Channel::kStokes, 2e5, 1.0, 1);
  TimeTagStream b = generate_poisson_stream(Channel::kAntiStokes, 2e5, 1.0, 2);
  const CoincidenceHistogram h = cross_correlation(a, b, 100, -5000, 5000, 1.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < h.g2.size(); ++i) {
    const double sigma = 1.0 / std::sqrt(h.accidental_level());
    EXPECT_NEAR(h.g2[i], 1.0, 5 * sigma);
    mean += h.g2[i];
  }
  mean /= static_cast<double>(h.g2.size());
  EXPECT_GE(mean, 0.98);
  EXPECT_LE(mean, 1.02);
}

TEST(Correlation, BinsCoverRangeAndCountsExact) {
  TimeTagStream a{Channel::kStokes, {10, 20, 30}};
  TimeTagStream b{Channel::kAntiStokes, {12, 25, 29, 31, 100}};
  const CoincidenceHistogram h = cross_correlation(a, b, 2, -10, 10, 1e-6);
  ASSERT_EQ(h.counts.size(), 10u);
  // Pairs with -10 <= tau < 10: (10,12)=2 (20,12)=-8 (20,25)=5 (20,29)=9
  // (30,25)=-5 (30,29)=-1 (30,31)=1 (10,...) only 12.
  std::vector<std::uint64_t> expect(10, 0);
  for (int tau : {2, -8, 5, 9, -5, -1, 1}) ++expect[(tau + 10) / 2];
  EXPECT_EQ(h.counts, expect);
  EXPECT_THROW(cross_correlation(a, b, 3, -10, 10), ValidationError);
  EXPECT_THROW(cross_correlation(TimeTagStream{}, b, 1, 0, 10), ValidationError);
  TimeTagStream bad{Channel::kStokes, {5, 3}};
  EXPECT_THROW(cross_correlation(bad, b, 1, 0, 10), ValidationError);
}

TEST(Correlation, SmoothedPeak) {
  CoincidenceHistogram h;
  h.bin_ns = 1;
  h.tau_min_ns = 0;
  h.g2 = {1, 1, 1, 1, 1, 30, 1, 1, 1, 1, 5, 5, 5, 5, 5, 1, 1};
  h.counts.assign(h.g2.size(), 0);
  const G2Peak p = g2_peak(h);
  EXPECT_NEAR(p.value, 6.8, 1e-12);  // the lone spike averages to 34/5
  EXPECT_NEAR(p.tau_ns, 3.5, 1e-12);  // first of the tied windows
  h.g2 = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 9, 9, 9, 9, 9, 1, 1};
  EXPECT_NEAR(g2_peak(h).tau_ns, 12.5, 1e-12);
}

TEST(AutoCorrelation, PoissonIsOneThermalIsTwo) {
  const TimeTagStream coherent = generate_poisson_stream(Channel::kStokes, 1e5, 5.0, 3);
  const AutoCorrelation c = auto_correlation(coherent, 20, 7, 5.0);
  EXPECT_NEAR(c.g2, 1.0, 5 * c.sigma);
  EXPECT_FALSE(c.low_statistics);

  const TimeTagStream thermal = generate_thermal_stream(1e5, 500.0, 2.0, 4);
  const AutoCorrelation t = auto_correlation(thermal, 10, 7, 2.0);
  EXPECT_NEAR(t.g2, 2.0, 5 * t.sigma);
  EXPECT_GT(t.g2, 1.5);

  EXPECT_THROW(auto_correlation(TimeTagStream{Channel::kStokes, {5}}, 1), ValidationError);
  const TimeTagStream few = generate_poisson_stream(Channel::kStokes, 100, 1.0, 1);
  EXPECT_TRUE(auto_correlation(few, 1000).low_statistics);
}

TEST(Arithmetic, CauchySchwarzAndVisibility) {
  EXPECT_EQ(cauchy_schwarz_factor(35.0, 2.0, 2.0), 306.25);
  EXPECT_EQ(cauchy_schwarz_factor(10.0, 2.0, 2.0), 25.0);
  EXPECT_EQ(cauchy_schwarz_factor(2.0, 2.0, 2.0), 1.0);
  EXPECT_EQ(visibility_from_g2(10.0), 9.0 / 11.0);
  EXPECT_EQ(visibility_from_g2(1.0), 0.0);
  EXPECT_EQ(visibility_from_g2(std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_NEAR(visibility_from_g2(1e12), 1.0, 1e-11);
  EXPECT_NEAR(g2_from_visibility(1.0 / std::sqrt(2.0)), 5.828, 0.001);
  EXPECT_NEAR(visibility_from_g2(g2_from_visibility(0.37)), 0.37, 1e-15);
  EXPECT_THROW(cauchy_schwarz_factor(-1.0, 2.0, 2.0), ValidationError);
}

TEST(Brightness, Accounting) {
  const ChannelEfficiency unit{1.0, 1.0, 1.0};
  EXPECT_NEAR(brightness_report(123.0, unit, unit, 1.0, 1.0, 1.0).generated_rate, 123.0, 1e-12);

  const ChannelEfficiency arm;
  const double detected = 9800.0 * arm.product() * arm.product() * 0.1;
  const BrightnessReport r = brightness_report(detected, arm, arm, 0.1, 2.9, 0.016);
  EXPECT_NEAR(r.generated_rate, 9800.0, 1e-9);
  EXPECT_NEAR(r.spectral_brightness, 3379.3, 0.1);
  EXPECT_NEAR(r.normalized_brightness, 211206.9, 1.0);
}

TEST(Fringe, PureStateFullVisibility) {
  ExperimentScenario sc = quiet_scenario(1.0, 11);
  sc.pair_rate = 1e5;  // 10^5 pairs per setting at 10 % duty over 10 s
  sc.duration_s = 10.0;
  const auto angles = scan_angles();
  const FringeScan s = fringe_scan(sc, 0.0, angles);
  ASSERT_TRUE(s.fit.has_value()) << s.diagnostic;
  EXPECT_GT(s.visibility, 0.99);
  // Only accidentals between photons of different pairs remain.
  EXPECT_GT(expected_fringe_visibility(sc, 0.0, angles), 0.99);
}

TEST(Fringe, VisibilityConvergesWithDuration) {
  ExperimentScenario sc = quiet_scenario(1.0, 13);
  sc.state = DensityMatrix::pure(bell_state(BellKind::kPsiPlus));
  sc.background_rate_stokes = 200.0;
  sc.background_rate_anti_stokes = 200.0;
  const auto angles = scan_angles();
  const double limit = expected_fringe_visibility(sc, 0.0, angles);
  double last_gap = 1.0;
  for (double t : {0.5, 5.0, 50.0}) {
    sc.duration_s = t;
    double gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      sc.seed = seed;
      gap += std::abs(fringe_scan(sc, 0.0, angles).visibility - limit) / 4.0;
    }
    EXPECT_LT(gap, last_gap * 1.2 + 1e-3) << t;
    last_gap = gap;
  }
  EXPECT_LT(last_gap, 0.02);
}

TEST(Fringe, UnlockedPhaseIsFlat) {
  LockSimulation sim;
  sim.controller.proportional_gain = 0.0;
  sim.controller.integral_gain = 0.0;
  sim.drift.step_std_rad = 0.5;
  sim.steps = 20000;
  sim.approx_tolerance = 1e-2;
  const double penalty = visibility_penalty(simulate_lock(sim));
  ExperimentScenario sc = quiet_scenario(20.0, 17);
  sc.state = two_path_density(bell_path_config(BellKind::kPsiPlus), penalty);
  const FringeScan s = fringe_scan(sc, -kPi / 4, scan_angles());
  EXPECT_LT(s.visibility, 0.05);
}

TEST(Fringe, FitFailureKeepsRawData) {
  ExperimentScenario sc = quiet_scenario(1e-6, 1);
  const std::vector<double> angles = {0.0, 0.5, 1.0};
  const FringeScan s = fringe_scan(sc, 0.0, angles);
  EXPECT_FALSE(s.fit.has_value());
  EXPECT_FALSE(s.diagnostic.empty());
  EXPECT_EQ(s.counts.size(), 3u);
}

TEST(Model, EfficiencyScalingLeavesPeakInvariant) {
  ExperimentScenario sc = reference_scenario(1.0, 1);
  sc.background_rate_stokes = 0.0;
  sc.background_rate_anti_stokes = 0.0;
  const double g = expected_peak_g2(sc);
  sc.efficiency_stokes.detector *= 0.5;
  sc.efficiency_anti_stokes.detector *= 0.5;
  EXPECT_NEAR(expected_peak_g2(sc), g, 1e-9 * g);
}

TEST(Model, EfficiencyScalingSimulated) {
  // Peak g2 is unchanged in expectation when both arms lose the same factor
  // and there is no background.
  ExperimentScenario sc = quiet_scenario(20.0, 1);
  sc.pair_rate = 2e5;
  auto peak = [](const ExperimentScenario& s) {
    const GeneratedStreams g = generate_timetags(s);
    return cross_correlation(g.stokes, g.anti_stokes, 10, 0, 300, s.duration_s);
  };
  const auto a = peak(sc);
  sc.efficiency_stokes.detector *= 0.6;
  sc.efficiency_anti_stokes.detector *= 0.6;
  sc.seed = 2;
  const auto b = peak(sc);
  const double ga = a.g2[2], gb = b.g2[2];
  const double sigma = gb / std::sqrt(static_cast<double>(b.counts[2])) + ga / std::sqrt(static_cast<double>(a.counts[2]));
  EXPECT_NEAR(ga, gb, 3 * sigma);
}

TEST(Model, ReferenceScenarioCalibration) {
  const ExperimentScenario sc = reference_scenario(1.0, 1);
  EXPECT_NEAR(expected_peak_g2(sc), 35.0, 1e-6);
  EXPECT_GT(sc.background_rate_stokes, 0.0);
  EXPECT_THROW(with_background_for_peak_g2(sc, 1e9), ValidationError);
  const auto angles = scan_angles();
  const ExperimentScenario tuned = with_leakage_for_visibility(sc, 0.85, 0.0, angles);
  EXPECT_NEAR(expected_fringe_visibility(tuned, 0.0, angles), 0.85, 1e-6);
}

}  // namespace
}  // namespace biphoton
