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

#ifndef BIPHOTON_PHASE_LOCK_H_
#define BIPHOTON_PHASE_LOCK_H_

#include <cstdint>
#include <span>
#include <vector>

#include "biphoton/fitting.h"

namespace biphoton {

/// Arm lengths of the two-path interferometer and the three laser wavelengths.
struct InterferometerGeometry {
  double coupling_arm1_m = 1.0;
  double coupling_arm2_m = 1.0;
  double pump_arm1_m = 1.0;
  double pump_arm2_m = 1.0;
  double pump_wavelength_m = 780e-9;
  double coupling_wavelength_m = 795e-9;
  double lock_wavelength_m = 795e-9;
  /// Extra phase the displaced reference beams pick up. The SFWM offset is
  /// phi_0 = -lock_ratio * reference_offset_rad.
  double reference_offset_rad = 0.0;

  void validate() const;
};

/// phi = (2pi/lambda_c)(Lc2 - Lc1) + (2pi/lambda_p)(Lp2 - Lp1); wrapped to
/// [0, 2pi) when `reduce` is set.
double sfwm_phase_exact(const InterferometerGeometry& geom, bool reduce = false);

/// Reference-laser phase k_l[(Lc2 + Lp2) - (Lc1 + Lp1)] + reference offset.
double lock_interferometer_phase(const InterferometerGeometry& geom);

/// k0 / k_l = (1/lambda_c + 1/lambda_p) / 2 * lambda_l.
double lock_ratio(double pump_wavelength, double coupling_wavelength, double lock_wavelength);
double lock_ratio(const InterferometerGeometry& geom);

/// SFWM offset phi_0 implied by the geometry's reference offset.
double sfwm_offset(const InterferometerGeometry& geom);

/// phi ~= ratio * lock_phase + offset.
double sfwm_phase_approx(double lock_phase, double ratio, double offset);
/// Lock set point that yields SFWM phase `phi`. Throws ValidationError for ratio == 0.
double lock_setpoint_for(double phi, double ratio, double offset);

struct DriftModel {
  double step_std_rad = 0.02;   // random-walk increment of the lock phase per step
  double step_interval_ms = 1.0;
  std::uint64_t seed = 1;
};

/// Discrete PI law with a per-step actuation limit and conditional integration.
struct ControllerParams {
  double proportional_gain = 0.2;
  double integral_gain = 0.6;
  double actuation_limit_rad = 0.5;
  double setpoint_rad = 0.0;  // lock-interferometer phase to hold
};

struct PhaseSample {
  double t_ms = 0.0;
  double lock_phase = 0.0;
  double phase = 0.0;  // SFWM phase phi(t)
};

struct PhaseTrace {
  std::vector<PhaseSample> samples;
  double target_phase = 0.0;
  double residual_rms = 0.0;          // of phi about target_phase
  double max_approx_error = 0.0;      // max |phi_exact - phi_approx| seen
};

struct LockSimulation {
  InterferometerGeometry geometry;
  DriftModel drift;
  ControllerParams controller;
  std::size_t steps = 10000;
  /// Bound on |phi_exact - phi_approx|; exceeded bounds throw std::runtime_error.
  double approx_tolerance = 1e-6;
};

/// Drift and actuation both move the path-2 pump and coupling arms together.
/// Deterministic for a fixed seed.
PhaseTrace simulate_lock(const LockSimulation& sim);

/// |<exp(i phi)>| over the trace; the coherence factor between the two paths.
double visibility_penalty(const PhaseTrace& trace);
double visibility_penalty(std::span<const double> phases);

/// Phase phi in [0, pi] of a Psi-type two-path state, read off a fringe
/// measured with the Stokes analyzer at -45 degrees: C / A = -cos(phi).
double fringe_phase_at_minus45(const SinusoidFit& fit);

/// One row of the set-point table for a desired SFWM phase.
struct LockTableRow {
  double target_phase = 0.0;
  double lock_setpoint = 0.0;
  double fringe_phase = 0.0;  // phase recovered from the simulated -45 degree fringe
};

struct LockCalibration {
  double ratio = 0.0;
  std::vector<LockTableRow> rows;
  AffineFit fit;  // fringe_phase against lock_setpoint
};

/// Calibration procedure: for each target phase, set the lock, compute the
/// -45 degree fringe of the resulting Psi state, recover its phase and fit
/// recovered phase against set point.
LockCalibration calibrate_setpoints(const InterferometerGeometry& geom,
                                    std::span<const double> target_phases);

}  // namespace biphoton

#endif  // BIPHOTON_PHASE_LOCK_H_
