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

#ifndef BIPHOTON_COINCIDENCE_H_
#define BIPHOTON_COINCIDENCE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/biphoton_spectrum.h"
#include "biphoton/fitting.h"
#include "biphoton/polarization_optics.h"
#include "biphoton/quantum_core.h"

namespace biphoton {

enum class Channel : std::uint8_t { kStokes = 0, kAntiStokes = 1 };

/// Detection events of one detector, in integer nanoseconds, sorted.
struct TimeTagStream {
  Channel channel = Channel::kStokes;
  std::vector<std::int64_t> times_ns;

  /// Throws ValidationError if times decrease or are negative.
  void validate() const;
};

/// Fiber coupling, filter transmission and detector efficiency of one arm.
struct ChannelEfficiency {
  double fiber = 0.70;
  double filter = 0.70;
  double detector = 0.50;

  double product() const { return fiber * filter * detector; }
  void validate() const;
};

struct ExperimentScenario {
  DensityMatrix state = DensityMatrix::pure(bell_state(BellKind::kPsiPlus));
  TemporalWaveform waveform;
  double pair_rate = 9800.0;         // generated pairs per second during generation windows
  double leakage_pair_rate = 0.0;    // time-correlated pairs with no polarization correlation
  double background_rate_stokes = 0.0;       // detected singles/s without analyzer, unpolarized
  double background_rate_anti_stokes = 0.0;
  ChannelEfficiency efficiency_stokes;
  ChannelEfficiency efficiency_anti_stokes;
  double duty_cycle = 0.10;
  std::optional<AnalyzerSetting> analyzer_stokes;
  std::optional<AnalyzerSetting> analyzer_anti_stokes;
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  std::size_t max_events = 200'000'000;

  void validate() const;
  /// Expected number of detection events over both channels.
  double expected_events() const;
};

/// Probabilities that a pair passes both analyzers, only the Stokes one,
/// or only the anti-Stokes one.
struct AnalyzerOutcome {
  double both = 1.0;
  double stokes_only = 0.0;
  double anti_stokes_only = 0.0;
};

AnalyzerOutcome analyzer_outcome(const DensityMatrix& rho,
                                 const std::optional<AnalyzerSetting>& stokes,
                                 const std::optional<AnalyzerSetting>& anti_stokes);

struct GeneratedStreams {
  TimeTagStream stokes{Channel::kStokes, {}};
  TimeTagStream anti_stokes{Channel::kAntiStokes, {}};
  std::size_t generated_pairs = 0;  // emitted pairs, before analyzers and losses
  std::size_t generated_leakage_pairs = 0;
};

/// Monte Carlo time tags. Pair emission is Poisson at pair_rate * duty_cycle;
/// anti-Stokes delays follow |psi(tau)|^2; each photon survives its arm's
/// efficiency chain independently; times are floored to 1 ns. Deterministic
/// in the seed. Throws ValidationError when expected_events() > max_events.
GeneratedStreams generate_timetags(const ExperimentScenario& scenario);

/// Chaotic-light single channel: photons from |E(t)|^2 with E a complex
/// Ornstein-Uhlenbeck field of correlation time coherence_ns.
TimeTagStream generate_thermal_stream(double rate, double coherence_ns, double duration_s,
                                      std::uint64_t seed);

/// Poisson stream of the given rate.
TimeTagStream generate_poisson_stream(Channel channel, double rate, double duration_s,
                                      std::uint64_t seed);

struct CoincidenceHistogram {
  std::int64_t bin_ns = 1;
  std::int64_t tau_min_ns = 0;  // left edge of bin 0; tau = t_2 - t_1
  std::vector<std::uint64_t> counts;
  std::vector<double> g2;
  std::size_t singles_1 = 0;
  std::size_t singles_2 = 0;
  double duration_s = 0.0;

  double tau_center_ns(std::size_t i) const {
    return static_cast<double>(tau_min_ns) + (static_cast<double>(i) + 0.5) * static_cast<double>(bin_ns);
  }
  /// Expected counts per bin for uncorrelated streams: N1 N2 bin / T.
  double accidental_level() const;
};

/// Histogram of tau = t_2 - t_1 over [tau_min, tau_max) with two-pointer sweep,
/// normalized as g2 = counts / (R1 R2 bin T). The range must be a whole number
/// of bins. duration_s <= 0 infers T from the span of both streams.
CoincidenceHistogram cross_correlation(const TimeTagStream& s1, const TimeTagStream& s2,
                                       std::int64_t bin_ns, std::int64_t tau_min_ns,
                                       std::int64_t tau_max_ns, double duration_s = 0.0);

/// Single-bin g2 over [start, start + width).
double window_g2(const TimeTagStream& s1, const TimeTagStream& s2, std::int64_t start_ns,
                 std::int64_t width_ns, double duration_s = 0.0);

struct G2Peak {
  double value = 0.0;
  double tau_ns = 0.0;
};

/// Maximum of the centered 5-bin moving average of g2.
G2Peak g2_peak(const CoincidenceHistogram& hist);

struct AutoCorrelation {
  double g2 = 0.0;
  double sigma = 0.0;  // Poisson error on the coincidence count
  std::uint64_t coincidences = 0;
  bool low_statistics = false;  // fewer than 1000 events
};

/// Zero-delay autocorrelation by a seeded 50/50 split of `s` into two
/// detectors (Hanbury Brown-Twiss). Throws ValidationError for < 2 events.
AutoCorrelation auto_correlation(const TimeTagStream& s, std::int64_t bin_ns,
                                 std::uint64_t split_seed = 7, double duration_s = 0.0);

/// g2_cross^2 / (g2_auto_s * g2_auto_as); > 1 is a violation.
double cauchy_schwarz_factor(double g2_cross_peak, double g2_auto_s, double g2_auto_as);

/// V = (g2 - 1) / (g2 + 1).
double visibility_from_g2(double g2);
/// Inverse of visibility_from_g2 for V < 1.
double g2_from_visibility(double visibility);

struct FringeScan {
  std::vector<double> angles;        // anti-Stokes analyzer angles (rad)
  std::vector<double> counts;        // windowed coincidences per angle
  std::optional<SinusoidFit> fit;
  double visibility = 0.0;
  std::string diagnostic;            // set when the fit failed
};

struct CoincidenceWindow {
  std::int64_t start_ns = 0;
  std::int64_t width_ns = 300;
};

/// Sets linear analyzers (Stokes at `stokes_angle`, anti-Stokes at each scan
/// angle), simulates, counts coincidences in the window and fits a fringe.
FringeScan fringe_scan(const ExperimentScenario& scenario, double stokes_angle,
                       std::span<const double> scan_angles, CoincidenceWindow window = {});

/// Expected windowed coincidences from the model, no sampling.
double expected_window_coincidences(const ExperimentScenario& scenario,
                                    CoincidenceWindow window = {});

/// Fringe visibility the model predicts for a scan, no sampling.
double expected_fringe_visibility(const ExperimentScenario& scenario, double stokes_angle,
                                  std::span<const double> scan_angles,
                                  CoincidenceWindow window = {});

/// Linear analyzer setting (QWP aligned with the HWP output) for angle theta.
AnalyzerSetting linear_setting(double theta);

struct BrightnessReport {
  double generated_rate = 0.0;        // pairs/s
  double spectral_brightness = 0.0;   // pairs/s/MHz
  double normalized_brightness = 0.0; // pairs/s/MHz/mW
};

BrightnessReport brightness_report(double detected_rate, const ChannelEfficiency& stokes,
                                   const ChannelEfficiency& anti_stokes, double duty_cycle,
                                   double bandwidth_mhz, double pump_power_mw);

/// Expected peak (1 ns bins) g2 of the scenario without analyzers.
double expected_peak_g2(const ExperimentScenario& scenario);

/// Sets equal background rates on both channels so that expected_peak_g2 == target.
ExperimentScenario with_background_for_peak_g2(ExperimentScenario scenario, double target);

/// Sets leakage_pair_rate so that the expected fringe visibility equals target.
ExperimentScenario with_leakage_for_visibility(ExperimentScenario scenario, double target,
                                               double stokes_angle,
                                               std::span<const double> scan_angles,
                                               CoincidenceWindow window = {});

/// Reference g2 numbers used to build the preset scenario.
struct ReferenceTargets {
  double peak_g2 = 35.0;
  double window_g2 = 10.0;
  double window_ns = 300.0;
  double rise_ns = 25.0;
};

/// Psi+ source at 9800 generated pairs/s, 10% duty, 0.7/0.7/0.5 arms, with
/// the rise-decay waveform and background fitted to the targets.
ExperimentScenario reference_scenario(double duration_s, std::uint64_t seed,
                                 const ReferenceTargets& targets = {});

}  // namespace biphoton

#endif  // BIPHOTON_COINCIDENCE_H_
