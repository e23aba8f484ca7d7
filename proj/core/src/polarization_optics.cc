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

#include "biphoton/polarization_optics.h"

#include <cmath>
#include <numbers>

namespace biphoton {

namespace {

Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

WaveplateElement::WaveplateElement(WaveplateKind kind, double angle) : kind_(kind) {
  if (!std::isfinite(angle)) throw ValidationError("WaveplateElement: non-finite angle");
  angle_ = std::fmod(angle, std::numbers::pi);
  if (angle_ < 0.0) angle_ += std::numbers::pi;
  if (angle_ >= std::numbers::pi) angle_ = 0.0;
}

AnalyzerChain::AnalyzerChain(std::vector<WaveplateElement> elements, PbsPort port)
    : elements_(std::move(elements)), port_(port) {
  if (elements_.size() > 2) throw ValidationError("AnalyzerChain: more than two waveplates");
  if (elements_.size() == 2 && !(elements_[0].kind() == WaveplateKind::kQuarter &&
                                 elements_[1].kind() == WaveplateKind::kHalf)) {
    throw ValidationError("AnalyzerChain: two-element chains must be QWP then HWP");
  }
}

AnalyzerChain AnalyzerSetting::chain() const {
  return AnalyzerChain({WaveplateElement::quarter(deg_to_rad(qwp_deg)),
                        WaveplateElement::half(deg_to_rad(hwp_deg))},
                       port);
}

Matrix2c jones_matrix(const WaveplateElement& element) {
  const double retardance =
      element.kind() == WaveplateKind::kHalf ? std::numbers::pi : std::numbers::pi / 2.0;
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, -retardance);
  const Eigen::Matrix2d r = rotation(element.angle());
  return r.transpose().cast<Complex>() * d * r.cast<Complex>();
}

PolarizationVector analyzer_projector(const AnalyzerChain& chain) {
  Matrix2c u = Matrix2c::Identity();
  for (const WaveplateElement& e : chain.elements()) u = jones_matrix(e) * u;
  const Vector2c port = chain.port() == PbsPort::kTransmit ? Vector2c(1.0, 0.0)
                                                           : Vector2c(0.0, 1.0);
  const Vector2c accepted = u.adjoint() * port;
  return {accepted(0), accepted(1)};
}

AnalyzerChain linear_analyzer(double theta) {
  return AnalyzerChain({WaveplateElement::half(theta / 2.0)}, PbsPort::kTransmit);
}

int circular_pair_index(Circular stokes, Circular anti_stokes) {
  // Canonical order HH=0, HV=1, VH=2, VV=3.
  if (stokes == Circular::kPlus) return anti_stokes == Circular::kMinus ? 0 : 1;
  return anti_stokes == Circular::kPlus ? 3 : 2;
}

void SfwmPathConfig::validate() const {
  if (!std::isfinite(phase)) throw ValidationError("SfwmPathConfig: non-finite phase");
  if (!(weight1 >= 0.0) || !(weight2 >= 0.0)) {
    throw ValidationError("SfwmPathConfig: negative path weight");
  }
  if (std::abs(weight1 * weight1 + weight2 * weight2 - 1.0) > 1e-9) {
    throw ValidationError("SfwmPathConfig: path weights must satisfy w1^2 + w2^2 = 1");
  }
}

SfwmPathConfig bell_path_config(BellKind kind) {
  SfwmPathConfig cfg;
  const bool psi = kind == BellKind::kPsiPlus || kind == BellKind::kPsiMinus;
  if (psi) {
    cfg.pump1 = Circular::kPlus;
    cfg.coupling1 = Circular::kMinus;
    cfg.pump2 = Circular::kMinus;
    cfg.coupling2 = Circular::kPlus;
  } else {
    cfg.pump1 = Circular::kPlus;
    cfg.coupling1 = Circular::kPlus;
    cfg.pump2 = Circular::kMinus;
    cfg.coupling2 = Circular::kMinus;
  }
  cfg.phase = (kind == BellKind::kPsiMinus || kind == BellKind::kPhiMinus) ? std::numbers::pi
                                                                            : 0.0;
  return cfg;
}

TwoPathState two_path_state(const SfwmPathConfig& cfg) {
  cfg.validate();
  const int i1 = circular_pair_index(cfg.pump1, cfg.coupling1);
  const int i2 = circular_pair_index(cfg.pump2, cfg.coupling2);
  Vector4c amps = Vector4c::Zero();
  amps(i1) += cfg.weight1;
  amps(i2) += cfg.weight2 * std::polar(1.0, cfg.phase);

  TwoPathState out;
  if (i1 == i2) {
    out.warning = "both SFWM paths emit the same polarization pair; output is a product state";
    // Interference between identical paths only rescales the amplitude.
    if (std::abs(amps(i1)) < 1e-12) amps(i1) = 1.0;
  } else if (cfg.weight1 == 0.0 || cfg.weight2 == 0.0) {
    out.warning = "one SFWM path is blocked; output is a product state";
  }
  out.state = TwoQubitState(amps);
  return out;
}

DensityMatrix two_path_density(const SfwmPathConfig& cfg, double coherence) {
  if (!(coherence >= 0.0 && coherence <= 1.0)) {
    throw ValidationError("two_path_density: coherence must lie in [0, 1]");
  }
  cfg.validate();
  const int i1 = circular_pair_index(cfg.pump1, cfg.coupling1);
  const int i2 = circular_pair_index(cfg.pump2, cfg.coupling2);
  if (i1 == i2) return DensityMatrix::pure(two_path_state(cfg).state);

  Matrix4c rho = Matrix4c::Zero();
  const Complex off = cfg.weight1 * cfg.weight2 * std::polar(1.0, -cfg.phase) * coherence;
  rho(i1, i1) = cfg.weight1 * cfg.weight1;
  rho(i2, i2) = cfg.weight2 * cfg.weight2;
  rho(i1, i2) = off;
  rho(i2, i1) = std::conj(off);
  return DensityMatrix::checked(rho);
}

}  // namespace biphoton
