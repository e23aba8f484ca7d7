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

#ifndef BIPHOTON_BIPHOTON_SPECTRUM_H_
#define BIPHOTON_BIPHOTON_SPECTRUM_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "biphoton/quantum_core.h"

namespace biphoton {

/// tau_c = a * P^(-b), tau_c in ns and P in mW.
struct PowerLaw {
  double a = 0.0;
  double b = 0.0;
  double operator()(double power_mw) const;
  /// Power at which the law gives `tau_ns`; throws if b == 0.
  double inverse(double tau_ns) const;
};

/// Least-squares fit of ln tau = ln a - b ln P. Needs at least two points,
/// all positive. Identical powers give b = 0 and a = geometric-mean tau.
PowerLaw calibrate_power_law(std::span<const std::pair<double, double>> points_mw_ns);

/// The law through the two coherence-time anchors (2 mW, 300 ns) and (0.13 mW, 900 ns).
PowerLaw anchor_power_law();

struct SpectralModelParams {
  double optical_depth = 32.0;
  double medium_length_m = 0.017;
  double coupling_power_mw = 2.0;
  double pump_detuning_mhz = 80.0;
  double dephasing_mhz = 0.0;
  PowerLaw law = anchor_power_law();
  /// tau_g = group_delay_scale * sqrt(OD) / window FWHM (rad/s).
  double group_delay_scale = 5.0;
  /// Detection-side rise (1 - exp(-tau/rise)) applied to |psi|^2; 0 disables it.
  double rise_time_ns = 25.0;

  void validate() const;
};

/// Uniform detuning grid delta_k = (k - N/2) * step around the line center (rad/s).
struct FrequencyGrid {
  std::size_t size = 0;
  double step = 0.0;

  /// 2^15 points spanning +/-128 MHz.
  static FrequencyGrid standard();
  /// `size` must be a power of two; span is the full width in MHz.
  static FrequencyGrid with_span_mhz(std::size_t size, double span_mhz);

  double at(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(size / 2)) * step;
  }
  double span() const { return step * static_cast<double>(size); }
  void validate() const;
};

struct BiphotonSpectrum {
  FrequencyGrid grid;
  std::vector<Complex> amplitude;  // Phi(delta)
};

/// psi(tau) on the uniform grid tau_n = start_ns + n * step_ns.
struct TemporalWaveform {
  double start_ns = 0.0;
  double step_ns = 1.0;
  std::vector<Complex> samples;

  double time_ns(std::size_t n) const { return start_ns + static_cast<double>(n) * step_ns; }
  double norm_squared() const;  // sum |psi|^2 dtau
  std::vector<double> intensity() const;
};

/// Lorentzian transparency window times the phase-matching sinc, with the
/// window FWHM (rad/s) given explicitly.
BiphotonSpectrum spectrum_for_window(const SpectralModelParams& params, double window_fwhm,
                                     const FrequencyGrid& grid);

/// Window FWHM (rad/s) at which the model waveform's coherence time equals
/// params.law(params.coupling_power_mw). Dephasing broadens on top of it.
double eit_window_fwhm(const SpectralModelParams& params, const FrequencyGrid& grid);

/// Calibrated spectrum for params.coupling_power_mw. Throws ValidationError
/// with the required span when the grid cannot hold the spectrum.
BiphotonSpectrum spectrum(const SpectralModelParams& params, const FrequencyGrid& grid);

/// psi(tau) = sum Phi(delta) exp(-i delta tau) d(delta)/2pi, not normalized.
TemporalWaveform inverse_transform(const BiphotonSpectrum& spec);
/// Phi(delta) = sum psi(tau) exp(i delta tau) dtau; inverse of the above.
BiphotonSpectrum forward_transform(const TemporalWaveform& wf);

/// Inverse transform scaled to unit L2 norm.
TemporalWaveform waveform_from_spectrum(const BiphotonSpectrum& spec);

/// Multiplies |psi|^2 by (1 - exp(-tau/rise_ns)) for tau > 0, zeroes tau <= 0,
/// and renormalizes. rise_ns == 0 only removes the acausal part.
TemporalWaveform apply_rise_time(const TemporalWaveform& wf, double rise_ns);

/// Spectrum -> waveform -> rise shaping, for params.coupling_power_mw.
TemporalWaveform model_waveform(const SpectralModelParams& params, const FrequencyGrid& grid);

/// Equivalent width of |psi|^2: integral over peak. Throws on an all-zero waveform.
double coherence_time(const TemporalWaveform& wf);

/// FWHM of |Phi|^2 in Hz, interpolated between grid points.
double spectral_fwhm_hz(const BiphotonSpectrum& spec);

/// Time-domain preset |psi|^2 ~ (1 - exp(-tau/rise)) exp(-tau/decay) on [0, length).
TemporalWaveform rise_decay_waveform(double decay_ns, double rise_ns, double step_ns = 0.25,
                                     double length_ns = -1.0);

/// Decay constant for which the rise-decay preset gives
/// max|psi|^2 * window_ns / P(0 <= tau < window_ns) == ratio. The ratio of a
/// 1 ns-bin g2 excess to a window-bin g2 excess equals that quantity.
double fit_decay_to_window_ratio(double ratio, double window_ns, double rise_ns);

}  // namespace biphoton

#endif  // BIPHOTON_BIPHOTON_SPECTRUM_H_
