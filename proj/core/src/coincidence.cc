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
#include <random>
#include <sstream>

namespace biphoton {

namespace {

constexpr double kNsPerS = 1e9;

/// Samples anti-Stokes delays from |psi(tau)|^2, uniformly inside each sample bin.
class DelaySampler {
 public:
  explicit DelaySampler(const TemporalWaveform& wf) : wf_(wf) {
    cdf_.reserve(wf.samples.size());
    double acc = 0.0;
    for (const Complex& c : wf.samples) {
      acc += std::norm(c);
      cdf_.push_back(acc);
    }
    if (!(acc > 0.0)) throw ValidationError("waveform has no intensity");
  }

  template <typename Rng>
  double operator()(Rng& rng) {
    const double u = uniform_(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto i = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
    return wf_.time_ns(i) + (uniform_(rng) - 0.5) * wf_.step_ns;
  }

 private:
  const TemporalWaveform& wf_;
  std::vector<double> cdf_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

Matrix2c projector(const std::optional<AnalyzerSetting>& setting) {
  if (!setting) return Matrix2c::Identity();
  const Vector2c a = analyzer_projector(setting->chain()).amplitudes();
  return a * a.adjoint();
}

Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double inferred_duration(const TimeTagStream& a, const TimeTagStream& b) {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const TimeTagStream* s : {&a, &b}) {
    if (s->times_ns.empty()) continue;
    lo = std::min(lo, s->times_ns.front());
    hi = std::max(hi, s->times_ns.back());
  }
  return static_cast<double>(hi - lo + 1) / kNsPerS;
}

struct SinglesRates {
  double stokes = 0.0;
  double anti_stokes = 0.0;
};

/// Expected detected singles and the correlated-coincidence rate per unit
/// of delay probability.
struct RateModel {
  SinglesRates singles;
  double correlated_pairs = 0.0;  // detected pairs/s whose delay follows |psi|^2
};

RateModel rate_model(const ExperimentScenario& sc) {
  const AnalyzerOutcome signal =
      analyzer_outcome(sc.state, sc.analyzer_stokes, sc.analyzer_anti_stokes);
  const AnalyzerOutcome leak = analyzer_outcome(DensityMatrix::maximally_mixed(),
                                                sc.analyzer_stokes, sc.analyzer_anti_stokes);
  const double eta_s = sc.efficiency_stokes.product();
  const double eta_as = sc.efficiency_anti_stokes.product();
  const double lambda = sc.pair_rate * sc.duty_cycle;
  const double lambda_leak = sc.leakage_pair_rate * sc.duty_cycle;
  const double bg_s = sc.background_rate_stokes * (sc.analyzer_stokes ? 0.5 : 1.0);
  const double bg_as = sc.background_rate_anti_stokes * (sc.analyzer_anti_stokes ? 0.5 : 1.0);

  RateModel m;
  m.singles.stokes = eta_s * (lambda * (signal.both + signal.stokes_only) +
                              lambda_leak * (leak.both + leak.stokes_only)) +
                     bg_s;
  m.singles.anti_stokes = eta_as * (lambda * (signal.both + signal.anti_stokes_only) +
                                    lambda_leak * (leak.both + leak.anti_stokes_only)) +
                          bg_as;
  m.correlated_pairs = eta_s * eta_as * (lambda * signal.both + lambda_leak * leak.both);
  return m;
}

double window_probability(const TemporalWaveform& wf, double start_ns, double width_ns) {
  double in = 0.0, total = 0.0;
  for (std::size_t i = 0; i < wf.samples.size(); ++i) {
    const double p = std::norm(wf.samples[i]);
    total += p;
    const double lo = wf.time_ns(i) - 0.5 * wf.step_ns;
    const double hi = lo + wf.step_ns;
    const double overlap = std::max(0.0, std::min(hi, start_ns + width_ns) - std::max(lo, start_ns));
    in += p * overlap / wf.step_ns;
  }
  return total > 0.0 ? in / total : 0.0;
}

double peak_density_per_ns(const TemporalWaveform& wf) {
  double peak = 0.0, total = 0.0;
  for (const Complex& c : wf.samples) {
    peak = std::max(peak, std::norm(c));
    total += std::norm(c);
  }
  if (!(total > 0.0)) throw ValidationError("waveform has no intensity");
  return peak / (total * wf.step_ns);
}

}  // namespace

void TimeTagStream::validate() const {
  for (std::size_t i = 0; i < times_ns.size(); ++i) {
    if (times_ns[i] < 0) throw ValidationError("TimeTagStream: negative time");
    if (i > 0 && times_ns[i] < times_ns[i - 1]) {
      std::ostringstream os;
      os << "TimeTagStream: times decrease at index " << i;
      throw ValidationError(os.str());
    }
  }
}

void ChannelEfficiency::validate() const {
  for (double e : {fiber, filter, detector}) {
    if (!(e > 0.0 && e <= 1.0)) throw ValidationError("ChannelEfficiency: must lie in (0, 1]");
  }
}

void ExperimentScenario::validate() const {
  efficiency_stokes.validate();
  efficiency_anti_stokes.validate();
  for (double r : {pair_rate, leakage_pair_rate, background_rate_stokes,
                   background_rate_anti_stokes}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("ExperimentScenario: rates must be >= 0");
  }
  if (!(duty_cycle > 0.0 && duty_cycle <= 1.0)) {
    throw ValidationError("ExperimentScenario: duty cycle must lie in (0, 1]");
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ValidationError("ExperimentScenario: duration must be > 0");
  }
  if (waveform.samples.empty()) throw ValidationError("ExperimentScenario: empty waveform");
  const DensityDiagnostics d = state.diagnostics();
  if (!d.physical()) throw ValidationError("ExperimentScenario: unphysical state (" + d.describe() + ")");
}

double ExperimentScenario::expected_events() const {
  const RateModel m = rate_model(*this);
  return (m.singles.stokes + m.singles.anti_stokes) * duration_s;
}

AnalyzerOutcome analyzer_outcome(const DensityMatrix& rho,
                                 const std::optional<AnalyzerSetting>& stokes,
                                 const std::optional<AnalyzerSetting>& anti_stokes) {
  const Matrix2c ps = projector(stokes);
  const Matrix2c pas = projector(anti_stokes);
  const Matrix2c id = Matrix2c::Identity();
  const Matrix4c& m = rho.matrix();
  AnalyzerOutcome out;
  out.both = std::clamp((m * kron2(ps, pas)).trace().real(), 0.0, 1.0);
  const double s = std::clamp((m * kron2(ps, id)).trace().real(), 0.0, 1.0);
  const double as = std::clamp((m * kron2(id, pas)).trace().real(), 0.0, 1.0);
  out.stokes_only = std::max(0.0, s - out.both);
  out.anti_stokes_only = std::max(0.0, as - out.both);
  return out;
}

GeneratedStreams generate_timetags(const ExperimentScenario& sc) {
  sc.validate();
  const double expected = sc.expected_events();
  if (expected > static_cast<double>(sc.max_events)) {
    std::ostringstream os;
    os << "generate_timetags: " << expected << " expected events exceed the cap of "
       << sc.max_events;
    throw ValidationError(os.str());
  }

  std::mt19937_64 rng(sc.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  DelaySampler delay(sc.waveform);
  const double t_end = sc.duration_s * kNsPerS;
  const double eta_s = sc.efficiency_stokes.product();
  const double eta_as = sc.efficiency_anti_stokes.product();

  GeneratedStreams out;
  std::vector<double> ts, tas;
  ts.reserve(static_cast<std::size_t>(expected / 2 * 1.1) + 16);
  tas.reserve(ts.capacity());

  const auto emit_pairs = [&](double rate, const DensityMatrix& rho) -> std::size_t {
    const AnalyzerOutcome o = analyzer_outcome(rho, sc.analyzer_stokes, sc.analyzer_anti_stokes);
    std::poisson_distribution<std::size_t> count(rate * sc.duty_cycle * sc.duration_s);
    const std::size_t n = rate > 0.0 ? count(rng) : 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = uniform(rng) * t_end;
      const double u = uniform(rng);
      const bool pass_s = u < o.both + o.stokes_only;
      const bool pass_as = u < o.both || (u >= o.both + o.stokes_only &&
                                          u < o.both + o.stokes_only + o.anti_stokes_only);
      const bool det_s = uniform(rng) < eta_s;
      const bool det_as = uniform(rng) < eta_as;
      const double tau = delay(rng);
      if (pass_s && det_s) ts.push_back(t);
      if (pass_as && det_as) tas.push_back(t + tau);
    }
    return n;
  };
  out.generated_pairs = emit_pairs(sc.pair_rate, sc.state);
  out.generated_leakage_pairs = emit_pairs(sc.leakage_pair_rate, DensityMatrix::maximally_mixed());

  const auto emit_background = [&](double rate, bool analyzed, std::vector<double>& dst) {
    const double r = rate * (analyzed ? 0.5 : 1.0);
    if (!(r > 0.0)) return;
    std::poisson_distribution<std::size_t> count(r * sc.duration_s);
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) dst.push_back(uniform(rng) * t_end);
  };
  emit_background(sc.background_rate_stokes, sc.analyzer_stokes.has_value(), ts);
  emit_background(sc.background_rate_anti_stokes, sc.analyzer_anti_stokes.has_value(), tas);

  const auto quantize = [&](const std::vector<double>& src, std::vector<std::int64_t>& dst) {
    dst.reserve(src.size());
    for (double t : src) {
      if (t >= 0.0 && t < t_end) dst.push_back(static_cast<std::int64_t>(std::floor(t)));
    }
    std::sort(dst.begin(), dst.end());
  };
  quantize(ts, out.stokes.times_ns);
  quantize(tas, out.anti_stokes.times_ns);
  return out;
}

TimeTagStream generate_poisson_stream(Channel channel, double rate, double duration_s,
                                      std::uint64_t seed) {
  if (!(rate >= 0.0) || !(duration_s > 0.0)) {
    throw ValidationError("generate_poisson_stream: invalid rate or duration");
  }
  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::size_t> count(rate * duration_s);
  std::uniform_real_distribution<double> uniform(0.0, duration_s * kNsPerS);
  TimeTagStream s{channel, {}};
  const std::size_t n = rate > 0.0 ? count(rng) : 0;
  s.times_ns.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.times_ns.push_back(static_cast<std::int64_t>(std::floor(uniform(rng))));
  }
  std::sort(s.times_ns.begin(), s.times_ns.end());
  return s;
}

TimeTagStream generate_thermal_stream(double rate, double coherence_ns, double duration_s,
                                      std::uint64_t seed) {
  if (!(rate > 0.0) || !(coherence_ns > 0.0) || !(duration_s > 0.0)) {
    throw ValidationError("generate_thermal_stream: invalid parameters");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double dt = coherence_ns / 25.0;
  const double a = std::exp(-dt / coherence_ns);
  const double kick = std::sqrt(1.0 - a * a);
  const auto steps = static_cast<std::size_t>(std::ceil(duration_s * kNsPerS / dt));

  Complex field(gauss(rng), gauss(rng));
  TimeTagStream s{Channel::kStokes, {}};
  s.times_ns.reserve(static_cast<std::size_t>(rate * duration_s * 1.2) + 16);
  const double mean_per_step = rate * dt / kNsPerS;
  for (std::size_t k = 0; k < steps; ++k) {
    field = a * field + kick * Complex(gauss(rng), gauss(rng));
    std::poisson_distribution<int> count(mean_per_step * std::norm(field));
    const int n = count(rng);
    for (int j = 0; j < n; ++j) {
      const double t = (static_cast<double>(k) + uniform(rng)) * dt;
      if (t < duration_s * kNsPerS) s.times_ns.push_back(static_cast<std::int64_t>(t));
    }
  }
  std::sort(s.times_ns.begin(), s.times_ns.end());
  return s;
}

double CoincidenceHistogram::accidental_level() const {
  return static_cast<double>(singles_1) * static_cast<double>(singles_2) *
         (static_cast<double>(bin_ns) / kNsPerS) / duration_s;
}

CoincidenceHistogram cross_correlation(const TimeTagStream& s1, const TimeTagStream& s2,
                                       std::int64_t bin_ns, std::int64_t tau_min_ns,
                                       std::int64_t tau_max_ns, double duration_s) {
  if (s1.times_ns.empty() || s2.times_ns.empty()) {
    throw ValidationError("cross_correlation: empty stream");
  }
  if (bin_ns <= 0 || tau_max_ns <= tau_min_ns || (tau_max_ns - tau_min_ns) % bin_ns != 0) {
    throw ValidationError("cross_correlation: range must be a positive whole number of bins");
  }
  s1.validate();
  s2.validate();

  CoincidenceHistogram h;
  h.bin_ns = bin_ns;
  h.tau_min_ns = tau_min_ns;
  h.counts.assign(static_cast<std::size_t>((tau_max_ns - tau_min_ns) / bin_ns), 0);
  h.singles_1 = s1.times_ns.size();
  h.singles_2 = s2.times_ns.size();
  h.duration_s = duration_s > 0.0 ? duration_s : inferred_duration(s1, s2);

  const auto& b = s2.times_ns;
  std::size_t first = 0;
  for (std::int64_t t1 : s1.times_ns) {
    const std::int64_t lo = t1 + tau_min_ns;
    const std::int64_t hi = t1 + tau_max_ns;
    while (first < b.size() && b[first] < lo) ++first;
    for (std::size_t k = first; k < b.size() && b[k] < hi; ++k) {
      ++h.counts[static_cast<std::size_t>((b[k] - lo) / bin_ns)];
    }
  }
  const double acc = h.accidental_level();
  h.g2.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    h.g2[i] = static_cast<double>(h.counts[i]) / acc;
  }
  return h;
}

double window_g2(const TimeTagStream& s1, const TimeTagStream& s2, std::int64_t start_ns,
                 std::int64_t width_ns, double duration_s) {
  return cross_correlation(s1, s2, width_ns, start_ns, start_ns + width_ns, duration_s).g2.at(0);
}

G2Peak g2_peak(const CoincidenceHistogram& hist) {
  const std::size_t n = hist.g2.size();
  if (n == 0) throw ValidationError("g2_peak: empty histogram");
  G2Peak best{-1.0, 0.0};
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) {
      if (hist.g2[i] > best.value) best = {hist.g2[i], hist.tau_center_ns(i)};
    }
    return best;
  }
  double window = 0.0;
  for (std::size_t i = 0; i < 5; ++i) window += hist.g2[i];
  for (std::size_t c = 2; c + 2 < n; ++c) {
    if (c > 2) window += hist.g2[c + 2] - hist.g2[c - 3];
    if (window / 5.0 > best.value) best = {window / 5.0, hist.tau_center_ns(c)};
  }
  return best;
}

AutoCorrelation auto_correlation(const TimeTagStream& s, std::int64_t bin_ns,
                                 std::uint64_t split_seed, double duration_s) {
  if (s.times_ns.size() < 2) throw ValidationError("auto_correlation: need at least two events");
  if (bin_ns <= 0) throw ValidationError("auto_correlation: bin must be positive");
  std::mt19937_64 rng(split_seed);
  std::bernoulli_distribution coin(0.5);
  TimeTagStream a{s.channel, {}}, b{s.channel, {}};
  for (std::int64_t t : s.times_ns) (coin(rng) ? a : b).times_ns.push_back(t);
  if (a.times_ns.empty() || b.times_ns.empty()) {
    throw ValidationError("auto_correlation: split left one detector empty");
  }
  const double duration = duration_s > 0.0 ? duration_s : inferred_duration(s, s);
  const std::int64_t lo = -(bin_ns / 2);
  const CoincidenceHistogram h = cross_correlation(a, b, bin_ns, lo, lo + bin_ns, duration);
  AutoCorrelation out;
  out.coincidences = h.counts[0];
  out.g2 = h.g2[0];
  out.sigma = out.coincidences > 0 ? out.g2 / std::sqrt(static_cast<double>(out.coincidences))
                                   : out.g2 + 1.0 / h.accidental_level();
  out.low_statistics = s.times_ns.size() < 1000;
  return out;
}

double cauchy_schwarz_factor(double g2_cross_peak, double g2_auto_s, double g2_auto_as) {
  if (!(g2_cross_peak > 0.0) || !(g2_auto_s > 0.0) || !(g2_auto_as > 0.0)) {
    throw ValidationError("cauchy_schwarz_factor: inputs must be positive");
  }
  return g2_cross_peak * g2_cross_peak / (g2_auto_s * g2_auto_as);
}

double visibility_from_g2(double g2) {
  if (!(g2 >= 0.0)) throw ValidationError("visibility_from_g2: g2 must be >= 0");
  if (std::isinf(g2)) return 1.0;
  return (g2 - 1.0) / (g2 + 1.0);
}

double g2_from_visibility(double v) {
  if (!(v > -1.0 && v < 1.0)) throw ValidationError("g2_from_visibility: V must lie in (-1, 1)");
  return (1.0 + v) / (1.0 - v);
}

AnalyzerSetting linear_setting(double theta) {
  AnalyzerSetting s;
  s.qwp_deg = theta * 180.0 / std::numbers::pi;
  s.hwp_deg = 0.5 * s.qwp_deg;
  s.port = PbsPort::kTransmit;
  return s;
}

FringeScan fringe_scan(const ExperimentScenario& scenario, double stokes_angle,
                       std::span<const double> scan_angles, CoincidenceWindow window) {
  FringeScan scan;
  scan.angles.assign(scan_angles.begin(), scan_angles.end());
  for (std::size_t i = 0; i < scan_angles.size(); ++i) {
    ExperimentScenario sc = scenario;
    sc.analyzer_stokes = linear_setting(stokes_angle);
    sc.analyzer_anti_stokes = linear_setting(scan_angles[i]);
    sc.seed = mix_seed(scenario.seed, i);
    const GeneratedStreams g = generate_timetags(sc);
    double count = 0.0;
    if (!g.stokes.times_ns.empty() && !g.anti_stokes.times_ns.empty()) {
      count = static_cast<double>(cross_correlation(g.stokes, g.anti_stokes, window.width_ns,
                                                    window.start_ns,
                                                    window.start_ns + window.width_ns,
                                                    sc.duration_s)
                                      .counts[0]);
    }
    scan.counts.push_back(count);
  }
  try {
    scan.fit = fit_fringe(scan.angles, scan.counts);
    scan.visibility = scan.fit->visibility();
  } catch (const ValidationError& e) {
    scan.diagnostic = e.what();
  }
  return scan;
}

double expected_window_coincidences(const ExperimentScenario& sc, CoincidenceWindow window) {
  const RateModel m = rate_model(sc);
  const double p_window = window_probability(sc.waveform, static_cast<double>(window.start_ns),
                                             static_cast<double>(window.width_ns));
  const double accidental = m.singles.stokes * m.singles.anti_stokes *
                            (static_cast<double>(window.width_ns) / kNsPerS);
  return (m.correlated_pairs * p_window + accidental) * sc.duration_s;
}

double expected_fringe_visibility(const ExperimentScenario& scenario, double stokes_angle,
                                  std::span<const double> scan_angles, CoincidenceWindow window) {
  std::vector<double> counts;
  for (double a : scan_angles) {
    ExperimentScenario sc = scenario;
    sc.analyzer_stokes = linear_setting(stokes_angle);
    sc.analyzer_anti_stokes = linear_setting(a);
    counts.push_back(expected_window_coincidences(sc, window));
  }
  return fit_fringe(scan_angles, counts).visibility();
}

BrightnessReport brightness_report(double detected_rate, const ChannelEfficiency& stokes,
                                   const ChannelEfficiency& anti_stokes, double duty_cycle,
                                   double bandwidth_mhz, double pump_power_mw) {
  stokes.validate();
  anti_stokes.validate();
  if (!(detected_rate > 0.0) || !(duty_cycle > 0.0 && duty_cycle <= 1.0) ||
      !(bandwidth_mhz > 0.0) || !(pump_power_mw > 0.0)) {
    throw ValidationError("brightness_report: inputs must be positive");
  }
  BrightnessReport r;
  r.generated_rate = detected_rate / (stokes.product() * anti_stokes.product() * duty_cycle);
  r.spectral_brightness = r.generated_rate / bandwidth_mhz;
  r.normalized_brightness = r.spectral_brightness / pump_power_mw;
  return r;
}

double expected_peak_g2(const ExperimentScenario& sc) {
  const RateModel m = rate_model(sc);
  const double accidental_per_ns = m.singles.stokes * m.singles.anti_stokes / kNsPerS;
  if (!(accidental_per_ns > 0.0)) throw ValidationError("expected_peak_g2: no singles");
  return 1.0 + m.correlated_pairs * peak_density_per_ns(sc.waveform) / accidental_per_ns;
}

ExperimentScenario with_background_for_peak_g2(ExperimentScenario sc, double target) {
  if (!(target > 1.0)) throw ValidationError("with_background_for_peak_g2: target must exceed 1");
  sc.background_rate_stokes = 0.0;
  sc.background_rate_anti_stokes = 0.0;
  const RateModel m = rate_model(sc);
  const double f_s = sc.analyzer_stokes ? 0.5 : 1.0;
  const double f_as = sc.analyzer_anti_stokes ? 0.5 : 1.0;
  // (a + f_s B)(b + f_as B) = K
  const double k = m.correlated_pairs * peak_density_per_ns(sc.waveform) * kNsPerS / (target - 1.0);
  const double a = m.singles.stokes, b = m.singles.anti_stokes;
  const double qa = f_s * f_as, qb = a * f_as + b * f_s, qc = a * b - k;
  const double bg = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
  if (!(bg >= 0.0)) {
    throw ValidationError("with_background_for_peak_g2: target exceeds the background-free g2");
  }
  sc.background_rate_stokes = bg;
  sc.background_rate_anti_stokes = bg;
  return sc;
}

ExperimentScenario with_leakage_for_visibility(ExperimentScenario sc, double target,
                                               double stokes_angle,
                                               std::span<const double> scan_angles,
                                               CoincidenceWindow window) {
  const auto v_at = [&](double leak) {
    ExperimentScenario t = sc;
    t.leakage_pair_rate = leak;
    return expected_fringe_visibility(t, stokes_angle, scan_angles, window);
  };
  if (v_at(0.0) < target) {
    throw ValidationError("with_leakage_for_visibility: visibility already below target");
  }
  double lo = 0.0, hi = std::max(sc.pair_rate, 1.0);
  while (v_at(hi) > target) {
    hi *= 2.0;
    if (hi > 1e12) throw ValidationError("with_leakage_for_visibility: target unreachable");
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (v_at(mid) > target ? lo : hi) = mid;
  }
  sc.leakage_pair_rate = 0.5 * (lo + hi);
  return sc;
}

ExperimentScenario reference_scenario(double duration_s, std::uint64_t seed, const ReferenceTargets& t) {
  ExperimentScenario sc;
  const double ratio = (t.peak_g2 - 1.0) / (t.window_g2 - 1.0);
  const double decay = fit_decay_to_window_ratio(ratio, t.window_ns, t.rise_ns);
  sc.waveform = rise_decay_waveform(decay, t.rise_ns);
  sc.duration_s = duration_s;
  sc.seed = seed;
  return with_background_for_peak_g2(sc, t.peak_g2);
}

}  // namespace biphoton
