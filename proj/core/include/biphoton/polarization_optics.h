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

#ifndef BIPHOTON_POLARIZATION_OPTICS_H_
#define BIPHOTON_POLARIZATION_OPTICS_H_

#include <optional>
#include <string>
#include <vector>

#include "biphoton/quantum_core.h"

namespace biphoton {

enum class WaveplateKind { kHalf, kQuarter };

/// Waveplate with its fast axis at `angle()` radians from H, kept in [0, pi).
class WaveplateElement {
 public:
  WaveplateElement(WaveplateKind kind, double angle);
  static WaveplateElement half(double angle) { return {WaveplateKind::kHalf, angle}; }
  static WaveplateElement quarter(double angle) { return {WaveplateKind::kQuarter, angle}; }

  WaveplateKind kind() const { return kind_; }
  double angle() const { return angle_; }

 private:
  WaveplateKind kind_;
  double angle_;
};

enum class PbsPort { kTransmit, kReflect };

/// Waveplates in propagation order followed by a PBS port. At most one QWP
/// followed by at most one HWP, as in each detection arm of the setup.
class AnalyzerChain {
 public:
  AnalyzerChain() = default;
  AnalyzerChain(std::vector<WaveplateElement> elements, PbsPort port);

  const std::vector<WaveplateElement>& elements() const { return elements_; }
  PbsPort port() const { return port_; }

 private:
  std::vector<WaveplateElement> elements_;
  PbsPort port_ = PbsPort::kTransmit;
};

/// Wire form of one arm's analyzer: `{qwp_deg, hwp_deg, port}`.
struct AnalyzerSetting {
  double qwp_deg = 0.0;
  double hwp_deg = 0.0;
  PbsPort port = PbsPort::kTransmit;

  AnalyzerChain chain() const;
  bool operator==(const AnalyzerSetting&) const = default;
};

/// J(theta) = R(-theta) diag(1, exp(-i Gamma)) R(theta), Gamma = pi (HWP) or pi/2 (QWP).
Matrix2c jones_matrix(const WaveplateElement& element);

/// State |a> accepted by the chain: detection probability is |<a|psi>|^2.
PolarizationVector analyzer_projector(const AnalyzerChain& chain);

/// HWP-only chain that transmits linear polarization at `theta` radians.
AnalyzerChain linear_analyzer(double theta);

enum class Circular { kPlus, kMinus };

/// Linear basis index that the QWP conversion assigns to a circular pair:
/// s+a- -> HH, s-a+ -> VV, s+a+ -> HV, s-a- -> VH.
int circular_pair_index(Circular stokes, Circular anti_stokes);

/// Pump/coupling polarizations of the two SFWM paths and their relative phase.
struct SfwmPathConfig {
  Circular pump1 = Circular::kPlus;
  Circular coupling1 = Circular::kMinus;
  Circular pump2 = Circular::kMinus;
  Circular coupling2 = Circular::kPlus;
  double phase = 0.0;
  double weight1 = 0.70710678118654752440;
  double weight2 = 0.70710678118654752440;

  /// Throws ValidationError unless weights are non-negative with w1^2 + w2^2 = 1
  /// and the phase is finite.
  void validate() const;
};

/// Path assignment that produces `kind` (phase 0 for the + states, pi for -).
SfwmPathConfig bell_path_config(BellKind kind);

struct TwoPathState {
  TwoQubitState state;
  std::optional<std::string> warning;  // set when the paths cannot entangle
};

/// w1 |p1 c1> + w2 e^{i phi} |p2 c2>, mapped to the linear basis.
TwoPathState two_path_state(const SfwmPathConfig& cfg);

/// Same state with the path coherence scaled by `coherence` in [0, 1]
/// (1 = pure state, 0 = incoherent mixture of the two paths).
DensityMatrix two_path_density(const SfwmPathConfig& cfg, double coherence);

}  // namespace biphoton

#endif  // BIPHOTON_POLARIZATION_OPTICS_H_
