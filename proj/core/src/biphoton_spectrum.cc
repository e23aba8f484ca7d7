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
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace biphoton {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMHz = 1e6;
// Edge-to-peak amplitude ratio a grid must reach.
constexpr double kEdgeRatio = 1e-3;
constexpr double kMinWindowsPerSpan = 10.0;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

std::size_t wrap(long long k, std::size_t n) {
  const long long m = static_cast<long long>(n);
  return static_cast<std::size_t>(((k % m) + m) % m);
}

}  // namespace

double PowerLaw::operator()(double power_mw) const {
  if (!(power_mw > 0.0)) throw ValidationError("PowerLaw: power must be positive");
  return a * std::pow(power_mw, -b);
}

double PowerLaw::inverse(double tau_ns) const {
  if (b == 0.0 || !(tau_ns > 0.0) || !(a > 0.0)) {
    throw ValidationError("PowerLaw::inverse: law is not invertible");
  }
  return std::pow(a / tau_ns, 1.0 / b);
}

PowerLaw calibrate_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw ValidationError("calibrate_power_law: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [p, tau] : points) {
    if (!(p > 0.0) || !(tau > 0.0)) {
      throw ValidationError("calibrate_power_law: powers and times must be positive");
    }
    sx += std::log(p);
    sy += std::log(tau);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [p, tau] : points) {
    const double dx = std::log(p) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(tau) - my);
  }
  PowerLaw law;
  if (sxx == 0.0) {
    law.b = 0.0;
    law.a = std::exp(my);
    return law;
  }
  const double slope = sxy / sxx;
  law.b = -slope;
  law.a = std::exp(my - slope * mx);
  return law;
}

PowerLaw anchor_power_law() {
  const std::pair<double, double> anchors[] = {{2.0, 300.0}, {0.13, 900.0}};
  return calibrate_power_law(anchors);
}

void SpectralModelParams::validate() const {
  if (!(optical_depth > 0.0)) throw ValidationError("SpectralModelParams: OD must be > 0");
  if (!(medium_length_m > 0.0)) throw ValidationError("SpectralModelParams: L must be > 0");
  if (!(coupling_power_mw > 0.0)) {
    throw ValidationError("SpectralModelParams: coupling power must be > 0");
  }
  if (!(pump_detuning_mhz > 0.0)) {
    throw ValidationError("SpectralModelParams: pump detuning must be > 0");
  }
  if (!(dephasing_mhz >= 0.0)) throw ValidationError("SpectralModelParams: dephasing < 0");
  if (!(law.a > 0.0) || !std::isfinite(law.b)) {
    throw ValidationError("SpectralModelParams: invalid calibration law");
  }
  if (!(group_delay_scale >= 0.0)) {
    throw ValidationError("SpectralModelParams: group_delay_scale < 0");
  }
  if (!(rise_time_ns >= 0.0)) throw ValidationError("SpectralModelParams: rise time < 0");
}

FrequencyGrid FrequencyGrid::standard() { return with_span_mhz(std::size_t{1} << 15, 256.0); }

FrequencyGrid FrequencyGrid::with_span_mhz(std::size_t size, double span_mhz) {
  FrequencyGrid g;
  g.size = size;
  g.step = kTwoPi * span_mhz * kMHz / static_cast<double>(size);
  g.validate();
  return g;
}

void FrequencyGrid::validate() const {
  if (!is_power_of_two(size)) throw ValidationError("FrequencyGrid: size must be a power of two");
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("FrequencyGrid: bad step");
}

double TemporalWaveform::norm_squared() const {
  double s = 0.0;
  for (const Complex& c : samples) s += std::norm(c);
  return s * step_ns;
}

std::vector<double> TemporalWaveform::intensity() const {
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(),
                 [](const Complex& c) { return std::norm(c); });
  return out;
}

BiphotonSpectrum spectrum_for_window(const SpectralModelParams& params, double window_fwhm,
                                     const FrequencyGrid& grid) {
  params.validate();
  grid.validate();
  if (!(window_fwhm > 0.0)) throw ValidationError("spectrum: window FWHM must be positive");

  const double lorentz_fwhm = window_fwhm + 2.0 * kTwoPi * params.dephasing_mhz * kMHz;
  const double group_delay = params.group_delay_scale * std::sqrt(params.optical_depth) /
                             window_fwhm;
  const double prefactor = params.medium_length_m / params.pump_detuning_mhz;

  BiphotonSpectrum spec;
  spec.grid = grid;
  spec.amplitude.resize(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) {
    const double d = grid.at(k);
    const Complex window = 1.0 / Complex(1.0, -2.0 * d / lorentz_fwhm);
    const Complex phase_matching = sinc(0.5 * d * group_delay) * std::polar(1.0, 0.5 * d * group_delay);
    spec.amplitude[k] = prefactor * window * phase_matching;
  }
  return spec;
}

TemporalWaveform inverse_transform(const BiphotonSpectrum& spec) {
  const std::size_t n = spec.grid.size;
  std::vector<Complex> shifted(n), out;
  for (std::size_t k = 0; k < n; ++k) {
    shifted[wrap(static_cast<long long>(k) - static_cast<long long>(n / 2), n)] = spec.amplitude[k];
  }
  Eigen::FFT<double> fft;
  fft.fwd(out, shifted);

  TemporalWaveform wf;
  wf.step_ns = kTwoPi / (static_cast<double>(n) * spec.grid.step) * 1e9;
  wf.start_ns = -static_cast<double>(n / 2) * wf.step_ns;
  wf.samples.resize(n);
  const double scale = spec.grid.step / kTwoPi;
  for (std::size_t i = 0; i < n; ++i) {
    wf.samples[i] = scale * out[wrap(static_cast<long long>(i) - static_cast<long long>(n / 2), n)];
  }
  return wf;
}

BiphotonSpectrum forward_transform(const TemporalWaveform& wf) {
  const std::size_t n = wf.samples.size();
  if (n == 0) throw ValidationError("forward_transform: empty waveform");
  std::vector<Complex> out;
  Eigen::FFT<double> fft;
  fft.inv(out, wf.samples);  // scaled by 1/n

  BiphotonSpectrum spec;
  spec.grid.size = n;
  spec.grid.step = kTwoPi / (static_cast<double>(n) * wf.step_ns * 1e-9);
  spec.amplitude.resize(n);
  const double dt = wf.step_ns * 1e-9;
  const double start = wf.start_ns * 1e-9;
  for (std::size_t k = 0; k < n; ++k) {
    const long long kp = static_cast<long long>(k) - static_cast<long long>(n / 2);
    const double d = static_cast<double>(kp) * spec.grid.step;
    spec.amplitude[k] = dt * static_cast<double>(n) * std::polar(1.0, d * start) * out[wrap(kp, n)];
  }
  return spec;
}

TemporalWaveform waveform_from_spectrum(const BiphotonSpectrum& spec) {
  TemporalWaveform wf = inverse_transform(spec);
  const double norm = std::sqrt(wf.norm_squared());
  if (!(norm > 0.0)) throw ValidationError("waveform_from_spectrum: zero spectrum");
  for (Complex& c : wf.samples) c /= norm;
  return wf;
}

TemporalWaveform apply_rise_time(const TemporalWaveform& wf, double rise_ns) {
  if (!(rise_ns >= 0.0)) throw ValidationError("apply_rise_time: negative rise time");
  TemporalWaveform out = wf;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = out.time_ns(i);
    if (t <= 0.0) {
      out.samples[i] = 0.0;
    } else if (rise_ns > 0.0) {
      out.samples[i] *= std::sqrt(-std::expm1(-t / rise_ns));
    }
  }
  const double norm = std::sqrt(out.norm_squared());
  if (!(norm > 0.0)) throw ValidationError("apply_rise_time: waveform has no causal part");
  for (Complex& c : out.samples) c /= norm;
  return out;
}

double coherence_time(const TemporalWaveform& wf) {
  double peak = 0.0;
  for (const Complex& c : wf.samples) peak = std::max(peak, std::norm(c));
  if (!(peak > 0.0)) throw ValidationError("coherence_time: all-zero waveform");
  return wf.norm_squared() / peak;
}

double eit_window_fwhm(const SpectralModelParams& params, const FrequencyGrid& grid) {
  params.validate();
  SpectralModelParams base = params;
  base.dephasing_mhz = 0.0;
  const double target = params.law(params.coupling_power_mw);
  const auto tau_at = [&](double window) {
    return coherence_time(
        apply_rise_time(waveform_from_spectrum(spectrum_for_window(base, window, grid)),
                        base.rise_time_ns));
  };
  // The shape is nearly scale-invariant, so one rescaling lands close.
  const double probe = kTwoPi * 10.0 * kMHz;
  const double guess = probe * tau_at(probe) / target;
  double lo = guess / 4.0, hi = guess * 4.0;
  if (tau_at(lo) < target || tau_at(hi) > target) {
    std::ostringstream os;
    os << "eit_window_fwhm: cannot reach coherence time " << target << " ns on this grid";
    throw ValidationError(os.str());
  }
  for (int it = 0; it < 80 && hi / lo > 1.0 + 1e-12; ++it) {
    const double mid = std::sqrt(lo * hi);
    (tau_at(mid) > target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

BiphotonSpectrum spectrum(const SpectralModelParams& params, const FrequencyGrid& grid) {
  params.validate();
  grid.validate();
  const double window = eit_window_fwhm(params, grid);
  const double span_mhz = grid.span() / kTwoPi / kMHz;
  const double window_mhz = window / kTwoPi / kMHz;
  if (span_mhz < kMinWindowsPerSpan * window_mhz) {
    std::ostringstream os;
    os << "spectrum: grid span " << span_mhz << " MHz is narrower than the required "
       << kMinWindowsPerSpan * window_mhz << " MHz (10 EIT widths)";
    throw ValidationError(os.str());
  }
  BiphotonSpectrum spec = spectrum_for_window(params, window, grid);
  double peak = 0.0;
  for (const Complex& c : spec.amplitude) peak = std::max(peak, std::abs(c));
  const double edge = std::max(std::abs(spec.amplitude.front()), std::abs(spec.amplitude.back()));
  if (edge / peak >= kEdgeRatio) {
    // The envelope falls off as 1/delta^2, so the span must grow as sqrt.
    std::ostringstream os;
    os << "spectrum: edge/peak amplitude " << edge / peak << " >= " << kEdgeRatio
       << "; required span about " << span_mhz * std::sqrt(edge / peak / kEdgeRatio) * 1.05
       << " MHz (have " << span_mhz << " MHz)";
    throw ValidationError(os.str());
  }
  return spec;
}

TemporalWaveform model_waveform(const SpectralModelParams& params, const FrequencyGrid& grid) {
  return apply_rise_time(waveform_from_spectrum(spectrum(params, grid)), params.rise_time_ns);
}

double spectral_fwhm_hz(const BiphotonSpectrum& spec) {
  const std::size_t n = spec.amplitude.size();
  if (n < 3) throw ValidationError("spectral_fwhm_hz: spectrum too short");
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = std::norm(spec.amplitude[k]);
  const std::size_t ipk = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  const double half = 0.5 * p[ipk];
  if (!(half > 0.0)) throw ValidationError("spectral_fwhm_hz: zero spectrum");

  std::size_t r = ipk;
  while (r + 1 < n && p[r + 1] >= half) ++r;
  std::size_t l = ipk;
  while (l > 0 && p[l - 1] >= half) --l;
  if (r + 1 >= n || l == 0) throw ValidationError("spectral_fwhm_hz: peak not contained in grid");
  const double right = spec.grid.at(r) + spec.grid.step * (p[r] - half) / (p[r] - p[r + 1]);
  const double left = spec.grid.at(l) - spec.grid.step * (p[l] - half) / (p[l] - p[l - 1]);
  return (right - left) / kTwoPi;
}

TemporalWaveform rise_decay_waveform(double decay_ns, double rise_ns, double step_ns,
                                     double length_ns) {
  if (!(decay_ns > 0.0) || !(rise_ns >= 0.0) || !(step_ns > 0.0)) {
    throw ValidationError("rise_decay_waveform: invalid time constants");
  }
  if (length_ns <= 0.0) length_ns = 30.0 * decay_ns + 10.0 * rise_ns;
  const auto n = static_cast<std::size_t>(std::ceil(length_ns / step_ns));
  TemporalWaveform wf;
  wf.start_ns = 0.0;
  wf.step_ns = step_ns;
  wf.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Midpoint sampling keeps the bin integral accurate near tau = 0.
    const double t = (static_cast<double>(i) + 0.5) * step_ns;
    const double rise = rise_ns > 0.0 ? -std::expm1(-t / rise_ns) : 1.0;
    wf.samples[i] = std::sqrt(rise * std::exp(-t / decay_ns));
  }
  wf.start_ns = 0.5 * step_ns;
  const double norm = std::sqrt(wf.norm_squared());
  for (Complex& c : wf.samples) c /= norm;
  return wf;
}

double fit_decay_to_window_ratio(double ratio, double window_ns, double rise_ns) {
  if (!(ratio > 1.0)) throw ValidationError("fit_decay_to_window_ratio: ratio must exceed 1");
  if (!(window_ns > 0.0) || !(rise_ns >= 0.0)) {
    throw ValidationError("fit_decay_to_window_ratio: invalid window or rise time");
  }
  const double w = window_ns, r = rise_ns;
  // Closed forms for p(t) = (1 - e^{-t/r}) e^{-t/d}.
  const auto ratio_at = [&](double d) {
    if (r == 0.0) return w / (d * -std::expm1(-w / d));
    const double c = r * d / (r + d);
    const double total = d - c;
    const double in_window = d * -std::expm1(-w / d) - c * -std::expm1(-w / c);
    const double t_peak = r * std::log1p(d / r);
    const double peak = -std::expm1(-t_peak / r) * std::exp(-t_peak / d);
    return peak / total * w / (in_window / total);
  };
  double lo = 1e-3 * w, hi = 1e3 * w;
  if (ratio_at(lo) < ratio || ratio_at(hi) > ratio) {
    throw ValidationError("fit_decay_to_window_ratio: ratio out of reach for this rise time");
  }
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-13; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ratio_at(mid) > ratio ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace biphoton
