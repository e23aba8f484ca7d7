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

#include "biphoton/biphoton_spectrum.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

namespace biphoton {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double peak_intensity(const TemporalWaveform& wf) {
  double m = 0.0;
  for (const Complex& c : wf.samples) m = std::max(m, std::norm(c));
  return m;
}

TEST(PowerLaw, AnchorsGiveExponent) {
  const PowerLaw law = anchor_power_law();
  EXPECT_NEAR(law.b, std::log(3.0) / std::log(2.0 / 0.13), 1e-12);
  EXPECT_NEAR(law.b, 0.402, 0.001);
  EXPECT_NEAR(law.a, 396.0, 1.0);
  EXPECT_NEAR(law(2.0), 300.0, 1e-9);
  EXPECT_NEAR(law(0.13), 900.0, 1e-9);
  EXPECT_NEAR(law.inverse(300.0), 2.0, 1e-9);
}

TEST(PowerLaw, DegenerateAndExact) {
  const std::vector<std::pair<double, double>> same = {{1.5, 420.0}, {1.5, 420.0}};
  const PowerLaw flat = calibrate_power_law(same);
  EXPECT_EQ(flat.b, 0.0);
  EXPECT_NEAR(flat.a, 420.0, 1e-9);

  const PowerLaw truth{512.5, 0.61};
  std::vector<std::pair<double, double>> pts;
  for (double p : {0.05, 0.3, 1.0, 4.0, 9.0}) pts.emplace_back(p, truth(p));
  const PowerLaw fit = calibrate_power_law(pts);
  EXPECT_NEAR(fit.a, truth.a, 1e-9);
  EXPECT_NEAR(fit.b, truth.b, 1e-9);

  const std::vector<std::pair<double, double>> bad = {{-1.0, 300.0}, {2.0, 300.0}};
  EXPECT_THROW(calibrate_power_law(bad), ValidationError);
  const std::vector<std::pair<double, double>> one = {{1.0, 300.0}};
  EXPECT_THROW(calibrate_power_law(one), ValidationError);
}

TEST(PowerLaw, LowerPowerLongerCoherence) {
  const PowerLaw law = anchor_power_law();
  double last = 0.0;
  for (double p = 4.0; p > 0.05; p *= 0.8) {
    EXPECT_GT(law(p), last);
    last = law(p);
  }
}

TEST(Transform, LorentzianGivesOneSidedExponential) {
  const FrequencyGrid grid = FrequencyGrid::with_span_mhz(1 << 16, 2000.0);
  const double gamma = kTwoPi * 0.5e6;  // HWHM in rad/s
  BiphotonSpectrum spec{grid, {}};
  for (std::size_t k = 0; k < grid.size; ++k) {
    spec.amplitude.push_back(1.0 / (gamma - Complex(0.0, 1.0) * grid.at(k)));
  }
  const TemporalWaveform wf = waveform_from_spectrum(spec);
  // |psi|^2 ~ exp(-2 gamma tau) for tau > 0, 1/e time 1/(2 gamma). The
  // truncated 1/delta tail rings at tau = 0, so compare two later points.
  const double tau_e_ns = 1e9 / (2.0 * gamma);
  auto at = [&](double t) {
    return std::norm(wf.samples[static_cast<std::size_t>(std::lround((t - wf.start_ns) / wf.step_ns))]);
  };
  for (double t : {100.0, 200.0, 400.0}) {
    EXPECT_NEAR(std::log(at(t + 50.0) / at(t)), -50.0 / tau_e_ns, 1e-3);
  }
  double neg = 0.0;
  for (double t = -400.0; t < -20.0; t += 10.0) neg = std::max(neg, at(t));
  EXPECT_LT(neg / at(20.0), 1e-3);
}

TEST(Waveform, ExponentialEquivalentWidth) {
  TemporalWaveform wf;
  wf.start_ns = 0.0;
  wf.step_ns = 0.01;
  const double tau0 = 80.0;
  for (int i = 0; i < 200000; ++i) wf.samples.push_back(std::exp(-wf.time_ns(i) / (2 * tau0)));
  EXPECT_NEAR(coherence_time(wf), tau0, 1e-3 * tau0);
}

TEST(Transform, ParsevalAndRoundTrip) {
  SpectralModelParams p;
  const FrequencyGrid grid = FrequencyGrid::standard();
  const BiphotonSpectrum spec = spectrum(p, grid);
  const TemporalWaveform wf = inverse_transform(spec);
  double freq = 0.0, time = 0.0;
  for (const Complex& c : spec.amplitude) freq += std::norm(c) * grid.step / kTwoPi;
  for (const Complex& c : wf.samples) time += std::norm(c) * wf.step_ns * 1e-9;
  EXPECT_NEAR(time / freq, 1.0, 1e-9);

  const BiphotonSpectrum back = forward_transform(wf);
  double err = 0.0, ref = 0.0;
  for (std::size_t k = 0; k < grid.size; ++k) {
    err += std::norm(back.amplitude[k] - spec.amplitude[k]);
    ref += std::norm(spec.amplitude[k]);
  }
  EXPECT_LT(std::sqrt(err / ref), 1e-9);
  EXPECT_NEAR(waveform_from_spectrum(spec).norm_squared(), 1.0, 1e-9);
}

TEST(Transform, RealSymmetricSpectrumGivesEvenWaveform) {
  const FrequencyGrid grid = FrequencyGrid::with_span_mhz(1 << 12, 200.0);
  BiphotonSpectrum spec{grid, {}};
  const double w = kTwoPi * 3e6;
  for (std::size_t k = 0; k < grid.size; ++k) {
    spec.amplitude.push_back(std::exp(-grid.at(k) * grid.at(k) / (w * w)));
  }
  const TemporalWaveform wf = inverse_transform(spec);
  const std::size_t n = wf.samples.size();
  const std::size_t zero = n / 2;  // tau = 0 sits at the center
  ASSERT_NEAR(wf.time_ns(zero), 0.0, 1e-9);
  for (std::size_t j = 1; j < n / 2; j += 37) {
    EXPECT_NEAR(std::abs(wf.samples[zero + j]), std::abs(wf.samples[zero - j]),
                1e-12 * std::abs(wf.samples[zero]));
  }
}

TEST(Spectrum, CalibratedAnchors) {
  const FrequencyGrid grid = FrequencyGrid::standard();
  for (auto [power, tau] : {std::pair{2.0, 300.0}, std::pair{0.13, 900.0}}) {
    SpectralModelParams p;
    p.coupling_power_mw = power;
    const BiphotonSpectrum spec = spectrum(p, grid);
    const TemporalWaveform wf = model_waveform(p, grid);
    const double tc = coherence_time(wf);
    EXPECT_NEAR(tc, tau, 0.05 * tau);
    const double tbp = spectral_fwhm_hz(spec) * tc * 1e-9;
    EXPECT_GE(tbp, 0.3);
    EXPECT_LE(tbp, 1.2);
    EXPECT_NEAR(wf.norm_squared(), 1.0, 1e-6);
  }
}

TEST(Spectrum, BandwidthNearReported) {
  const FrequencyGrid grid = FrequencyGrid::standard();
  SpectralModelParams p;
  EXPECT_NEAR(spectral_fwhm_hz(spectrum(p, grid)) / 1e6, 2.9, 0.6);
  p.coupling_power_mw = 0.13;
  EXPECT_NEAR(spectral_fwhm_hz(spectrum(p, grid)) / 1e6, 0.8, 0.2);
}

TEST(Spectrum, WindowScalingDoublesWidth) {
  SpectralModelParams p;
  const FrequencyGrid grid = FrequencyGrid::standard();
  const double w = kTwoPi * 2e6;
  const double f1 = spectral_fwhm_hz(spectrum_for_window(p, w, grid));
  const double f2 = spectral_fwhm_hz(spectrum_for_window(p, 2 * w, grid));
  EXPECT_NEAR(f2 / f1, 2.0, 0.01);
}

TEST(Spectrum, EdgeIsSmallAndNarrowGridRejected) {
  SpectralModelParams p;
  const FrequencyGrid grid = FrequencyGrid::standard();
  const BiphotonSpectrum spec = spectrum(p, grid);
  double peak = 0.0;
  for (const Complex& c : spec.amplitude) peak = std::max(peak, std::abs(c));
  EXPECT_LT(std::abs(spec.amplitude.front()) / peak, 1e-3);
  EXPECT_LT(std::abs(spec.amplitude.back()) / peak, 1e-3);
  try {
    spectrum(p, FrequencyGrid::with_span_mhz(1 << 12, 10.0));
    FAIL() << "narrow grid accepted";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("span"), std::string::npos);
  }
}

TEST(Spectrum, BandwidthTimeProductAcrossParameters) {
  const FrequencyGrid grid = FrequencyGrid::standard();
  for (double power : {0.2, 0.5, 1.0, 3.0}) {
    for (double od : {10.0, 32.0, 60.0}) {
      SpectralModelParams p;
      p.coupling_power_mw = power;
      p.optical_depth = od;
      const double tbp = spectral_fwhm_hz(spectrum(p, grid)) * coherence_time(model_waveform(p, grid)) * 1e-9;
      EXPECT_GE(tbp, 0.3) << power << " " << od;
      EXPECT_LE(tbp, 1.2) << power << " " << od;
    }
  }
}

TEST(Spectrum, CausalSupportDominates) {
  SpectralModelParams p;
  p.rise_time_ns = 0.0;
  const FrequencyGrid grid = FrequencyGrid::standard();
  const TemporalWaveform wf = waveform_from_spectrum(spectrum(p, grid));
  double neg = 0.0, total = 0.0;
  for (std::size_t i = 0; i < wf.samples.size(); ++i) {
    total += std::norm(wf.samples[i]);
    if (wf.time_ns(i) < -3 * wf.step_ns) neg += std::norm(wf.samples[i]);
  }
  EXPECT_LT(neg / total, 0.01);
}

TEST(Params, Validation) {
  SpectralModelParams p;
  p.optical_depth = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = SpectralModelParams{};
  p.coupling_power_mw = -1.0;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_THROW(FrequencyGrid::with_span_mhz(1000, 10.0), ValidationError);
}

TEST(Waveform, CoherenceTimeOfZeroThrows) {
  TemporalWaveform wf;
  wf.samples.assign(8, Complex(0.0));
  EXPECT_THROW(coherence_time(wf), ValidationError);
}

TEST(RiseDecay, WindowRatioSolve) {
  const double ratio = 34.0 / 9.0;
  const double decay = fit_decay_to_window_ratio(ratio, 300.0, 25.0);
  const TemporalWaveform wf = rise_decay_waveform(decay, 25.0);
  double in = 0.0, total = 0.0;
  for (std::size_t i = 0; i < wf.samples.size(); ++i) {
    total += std::norm(wf.samples[i]);
    if (wf.time_ns(i) < 300.0) in += std::norm(wf.samples[i]);
  }
  const double p_max = peak_intensity(wf) / (total * wf.step_ns);
  EXPECT_NEAR(p_max * 300.0 / (in / total), ratio, 1e-3);
  // Peak of (1 - e^{-t/r}) e^{-t/d} sits at r ln(1 + d/r).
  std::size_t ip = 0;
  for (std::size_t i = 0; i < wf.samples.size(); ++i) {
    if (std::norm(wf.samples[i]) > std::norm(wf.samples[ip])) ip = i;
  }
  EXPECT_NEAR(wf.time_ns(ip), 25.0 * std::log(1.0 + decay / 25.0), 0.5);
}

TEST(RiseTime, ShapesIntensity) {
  TemporalWaveform wf;
  wf.start_ns = -10.0;
  wf.step_ns = 1.0;
  for (int i = 0; i < 400; ++i) {
    const double t = wf.time_ns(i);
    wf.samples.push_back(t < 0 ? Complex(0.1) : Complex(std::exp(-t / 100.0)));
  }
  const TemporalWaveform shaped = apply_rise_time(wf, 25.0);
  EXPECT_NEAR(shaped.norm_squared(), 1.0, 1e-12);
  for (std::size_t i = 0; i < 11; ++i) EXPECT_EQ(std::norm(shaped.samples[i]), 0.0);
  const double r = std::norm(shaped.samples[60]) / std::norm(shaped.samples[200]);
  const double expect = (1 - std::exp(-50.0 / 25)) * std::exp(-100.0 / 100) /
                        ((1 - std::exp(-190.0 / 25)) * std::exp(-380.0 / 100));
  EXPECT_NEAR(r, expect, 1e-9);
}

}  // namespace
}  // namespace biphoton
