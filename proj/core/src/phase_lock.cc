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

#include "biphoton/phase_lock.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "biphoton/polarization_optics.h"
#include "biphoton/quantum_core.h"

namespace biphoton {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void InterferometerGeometry::validate() const {
  for (double l : {coupling_arm1_m, coupling_arm2_m, pump_arm1_m, pump_arm2_m}) {
    if (!(l > 0.0)) throw ValidationError("InterferometerGeometry: arm lengths must be > 0");
  }
  for (double w : {pump_wavelength_m, coupling_wavelength_m, lock_wavelength_m}) {
    if (!(w > 0.0)) throw ValidationError("InterferometerGeometry: wavelengths must be > 0");
  }
  if (!std::isfinite(reference_offset_rad)) {
    throw ValidationError("InterferometerGeometry: non-finite offset");
  }
}

double sfwm_phase_exact(const InterferometerGeometry& g, bool reduce) {
  g.validate();
  double phi = kTwoPi / g.coupling_wavelength_m * (g.coupling_arm2_m - g.coupling_arm1_m) +
               kTwoPi / g.pump_wavelength_m * (g.pump_arm2_m - g.pump_arm1_m);
  if (reduce) {
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
  }
  return phi;
}

double lock_interferometer_phase(const InterferometerGeometry& g) {
  g.validate();
  return kTwoPi / g.lock_wavelength_m *
             ((g.coupling_arm2_m + g.pump_arm2_m) - (g.coupling_arm1_m + g.pump_arm1_m)) +
         g.reference_offset_rad;
}

double lock_ratio(double pump_wavelength, double coupling_wavelength, double lock_wavelength) {
  if (!(pump_wavelength > 0.0) || !(coupling_wavelength > 0.0) || !(lock_wavelength > 0.0)) {
    throw ValidationError("lock_ratio: wavelengths must be positive");
  }
  return 0.5 * (1.0 / coupling_wavelength + 1.0 / pump_wavelength) * lock_wavelength;
}

double lock_ratio(const InterferometerGeometry& g) {
  return lock_ratio(g.pump_wavelength_m, g.coupling_wavelength_m, g.lock_wavelength_m);
}

double sfwm_offset(const InterferometerGeometry& g) {
  return -lock_ratio(g) * g.reference_offset_rad;
}

double sfwm_phase_approx(double lock_phase, double ratio, double offset) {
  return ratio * lock_phase + offset;
}

double lock_setpoint_for(double phi, double ratio, double offset) {
  if (ratio == 0.0) throw ValidationError("lock_setpoint_for: ratio is zero");
  return (phi - offset) / ratio;
}

PhaseTrace simulate_lock(const LockSimulation& sim) {
  sim.geometry.validate();
  if (!(sim.drift.step_std_rad >= 0.0)) throw ValidationError("DriftModel: negative std");
  if (!(sim.drift.step_interval_ms > 0.0)) throw ValidationError("DriftModel: bad interval");
  const ControllerParams& c = sim.controller;
  if (!(c.proportional_gain >= 0.0) || !(c.integral_gain >= 0.0)) {
    throw ValidationError("ControllerParams: gains must be >= 0");
  }
  if (!(c.actuation_limit_rad > 0.0)) {
    throw ValidationError("ControllerParams: actuation limit must be > 0");
  }
  if (sim.steps == 0) throw ValidationError("simulate_lock: duration must be positive");

  const double ratio = lock_ratio(sim.geometry);
  const double offset = sfwm_offset(sim.geometry);
  // Moving both path-2 arms by x changes the lock phase by 2 k_l x.
  const double rad_to_m = sim.geometry.lock_wavelength_m / (2.0 * kTwoPi);

  // Bring the lock onto its set point at t = 0.
  InterferometerGeometry geom = sim.geometry;
  const double initial_error = c.setpoint_rad - lock_interferometer_phase(geom);
  geom.coupling_arm2_m += initial_error * rad_to_m;
  geom.pump_arm2_m += initial_error * rad_to_m;

  std::mt19937_64 rng(sim.drift.seed);
  std::normal_distribution<double> step(0.0, 1.0);

  PhaseTrace trace;
  trace.target_phase = sfwm_phase_approx(c.setpoint_rad, ratio, offset);
  trace.samples.reserve(sim.steps);

  double integral = 0.0;
  double actuator = 0.0;  // rad of lock phase applied by the transducer
  double sum_sq = 0.0;
  for (std::size_t n = 0; n < sim.steps; ++n) {
    const double drift_rad = sim.drift.step_std_rad * step(rng);
    geom.coupling_arm2_m += drift_rad * rad_to_m;
    geom.pump_arm2_m += drift_rad * rad_to_m;

    const double lock_phase = lock_interferometer_phase(geom);
    const double phi = sfwm_phase_exact(geom);
    const double approx = sfwm_phase_approx(lock_phase, ratio, offset);
    const double approx_error = std::abs(phi - approx);
    trace.max_approx_error = std::max(trace.max_approx_error, approx_error);
    if (approx_error > sim.approx_tolerance) {
      throw std::runtime_error("simulate_lock: small-delta approximation exceeded tolerance");
    }
    trace.samples.push_back({static_cast<double>(n + 1) * sim.drift.step_interval_ms,
                             lock_phase, phi});
    sum_sq += (phi - trace.target_phase) * (phi - trace.target_phase);

    // Feedback acts after the measurement, for the next step.
    const double error = c.setpoint_rad - lock_phase;
    const double candidate_integral = integral + error;
    const double command = c.proportional_gain * error + c.integral_gain * candidate_integral;
    double move = command - actuator;
    if (std::abs(move) > c.actuation_limit_rad) {
      move = std::copysign(c.actuation_limit_rad, move);
    } else {
      integral = candidate_integral;
    }
    actuator += move;
    geom.coupling_arm2_m += move * rad_to_m;
    geom.pump_arm2_m += move * rad_to_m;
  }
  trace.residual_rms = std::sqrt(sum_sq / static_cast<double>(sim.steps));
  return trace;
}

double visibility_penalty(std::span<const double> phases) {
  if (phases.empty()) throw ValidationError("visibility_penalty: empty trace");
  std::complex<double> sum = 0.0;
  for (double p : phases) sum += std::polar(1.0, p);
  return std::min(1.0, std::abs(sum) / static_cast<double>(phases.size()));
}

double visibility_penalty(const PhaseTrace& trace) {
  std::vector<double> phases;
  phases.reserve(trace.samples.size());
  for (const PhaseSample& s : trace.samples) phases.push_back(s.phase);
  return visibility_penalty(phases);
}

double fringe_phase_at_minus45(const SinusoidFit& fit) {
  const double c = std::clamp(-fit.sin_coefficient / fit.offset, -1.0, 1.0);
  return std::acos(c);
}

LockCalibration calibrate_setpoints(const InterferometerGeometry& geom,
                                    std::span<const double> target_phases) {
  geom.validate();
  LockCalibration cal;
  cal.ratio = lock_ratio(geom);
  const double offset = sfwm_offset(geom);
  const PolarizationVector stokes = PolarizationVector::linear(-std::numbers::pi / 4.0);

  std::vector<double> angles;
  for (int i = 0; i < 12; ++i) angles.push_back(std::numbers::pi * i / 12.0);

  std::vector<double> x, y;
  for (double target : target_phases) {
    LockTableRow row;
    row.target_phase = target;
    row.lock_setpoint = lock_setpoint_for(target, cal.ratio, offset);

    SfwmPathConfig cfg = bell_path_config(BellKind::kPsiPlus);
    cfg.phase = sfwm_phase_approx(row.lock_setpoint, cal.ratio, offset);
    const TwoQubitState psi = two_path_state(cfg).state;
    std::vector<double> p;
    for (double a : angles) {
      p.push_back(projection_probability(psi, stokes, PolarizationVector::linear(a)));
    }
    row.fringe_phase = fringe_phase_at_minus45(fit_fringe(angles, p));
    x.push_back(row.lock_setpoint);
    y.push_back(row.fringe_phase);
    cal.rows.push_back(row);
  }
  if (x.size() >= 2) cal.fit = fit_affine(x, y);
  return cal;
}

}  // namespace biphoton
