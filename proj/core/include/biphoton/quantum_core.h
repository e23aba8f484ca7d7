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

#ifndef BIPHOTON_QUANTUM_CORE_H_
#define BIPHOTON_QUANTUM_CORE_H_

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace biphoton {

using Complex = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPhysicalEigenTolerance = 1e-9;

/// Canonical two-photon basis order. Index = 2 * stokes + antiStokes, H = 0.
inline constexpr std::array<const char*, 4> kCanonicalBasis = {"HH", "HV", "VH", "VV"};

/// Single-photon polarization (h, v). Always unit norm.
class PolarizationVector {
 public:
  PolarizationVector() : amps_(1.0, 0.0) {}
  /// Normalizes; throws ValidationError on a zero vector.
  PolarizationVector(Complex h, Complex v);

  static PolarizationVector horizontal() { return {1.0, 0.0}; }
  static PolarizationVector vertical() { return {0.0, 1.0}; }
  /// Linear polarization at `theta` radians from H.
  static PolarizationVector linear(double theta);
  /// sigma+ = (H + iV)/sqrt2.
  static PolarizationVector circular_plus();
  /// sigma- = (H - iV)/sqrt2.
  static PolarizationVector circular_minus();

  Complex h() const { return amps_(0); }
  Complex v() const { return amps_(1); }
  const Vector2c& amplitudes() const { return amps_; }

 private:
  Vector2c amps_;
};

/// Pure two-photon polarization state in (HH, HV, VH, VV) order; unit norm.
class TwoQubitState {
 public:
  TwoQubitState() : amps_(Vector4c::Unit(0)) {}
  /// Normalizes; throws ValidationError on a zero vector.
  explicit TwoQubitState(const Vector4c& amplitudes);

  static TwoQubitState product(const PolarizationVector& stokes,
                               const PolarizationVector& anti_stokes);

  const Vector4c& amplitudes() const { return amps_; }
  Complex operator[](int i) const { return amps_(i); }

 private:
  Vector4c amps_;
};

/// Scalars that decide whether a 4x4 matrix is a valid density matrix.
struct DensityDiagnostics {
  double hermiticity_residual = 0.0;  // max |rho - rho^dagger| elementwise
  double trace_residual = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;        // of the Hermitian part
  double purity = 0.0;                // Re Tr(rho^2)

  bool hermitian() const { return hermiticity_residual <= kHermiticityTolerance; }
  bool unit_trace() const { return trace_residual <= kTraceTolerance; }
  bool positive() const { return min_eigenvalue >= -kPhysicalEigenTolerance; }
  bool physical() const { return hermitian() && unit_trace() && positive(); }
  std::string describe() const;
};

/// Reports the four diagnostics; never mutates the input.
DensityDiagnostics validate_density(const Matrix4c& rho);

/// 4x4 density matrix in canonical basis order.
///
/// Internally produced matrices go through `checked`, which enforces the
/// physicality invariants. Matrices ingested from files use `unchecked` and
/// carry their diagnostics so that violations stay visible.
class DensityMatrix {
 public:
  DensityMatrix() : rho_(Matrix4c::Identity() / 4.0) {}

  /// Throws ValidationError if `rho` is not Hermitian, unit trace and PSD.
  static DensityMatrix checked(const Matrix4c& rho);
  static DensityMatrix unchecked(const Matrix4c& rho);
  static DensityMatrix pure(const TwoQubitState& psi);
  static DensityMatrix maximally_mixed() { return DensityMatrix(); }

  const Matrix4c& matrix() const { return rho_; }
  Complex operator()(int r, int c) const { return rho_(r, c); }
  DensityDiagnostics diagnostics() const { return validate_density(rho_); }

 private:
  explicit DensityMatrix(const Matrix4c& rho) : rho_(rho) {}
  Matrix4c rho_;
};

/// How strictly an operation checks its density-matrix argument.
enum class InputPolicy {
  kStrict,    // Hermitian, unit trace (and PSD where required)
  kIngested,  // printed/ingested matrices: Hermitian part used, no renormalization
};

enum class BellKind { kPsiPlus, kPsiMinus, kPhiPlus, kPhiMinus };

inline constexpr std::array<BellKind, 4> kAllBellKinds = {
    BellKind::kPsiPlus, BellKind::kPsiMinus, BellKind::kPhiPlus, BellKind::kPhiMinus};

std::string to_string(BellKind kind);
/// Accepts "PsiPlus", "psi+", "Psi+" and similar spellings.
BellKind parse_bell_kind(const std::string& name);

/// Psi(+/-) = (HH +/- VV)/sqrt2, Phi(+/-) = (HV +/- VH)/sqrt2. These follow
/// the circular-to-linear map s+a- -> HH, s-a+ -> VV, s+a+ -> HV, s-a- -> VH.
TwoQubitState bell_state(BellKind kind);

struct Fidelity {
  double prob = 0.0;  // <psi|rho|psi>
  double sqrt = 0.0;  // sqrt(max(prob, 0))
};

Fidelity fidelity(const DensityMatrix& rho, const TwoQubitState& target,
                  InputPolicy policy = InputPolicy::kStrict);

/// |<a|b>| for comparing states up to a global phase.
double overlap(const TwoQubitState& a, const TwoQubitState& b);

/// p = <a_s (x) a_as| rho |a_s (x) a_as>.
double projection_probability(const DensityMatrix& rho, const PolarizationVector& analyzer_s,
                              const PolarizationVector& analyzer_as);
double projection_probability(const TwoQubitState& psi, const PolarizationVector& analyzer_s,
                              const PolarizationVector& analyzer_as);

/// T_ij = Tr(rho sigma_i (x) sigma_j), i, j over (x, y, z). Uses the Hermitian part.
Eigen::Matrix3d correlation_tensor(const Matrix4c& rho);

/// Analyzer directions on the Bloch sphere for one CHSH experiment.
struct ChshSettings {
  Eigen::Vector3d a, a_prime;  // Stokes arm
  Eigen::Vector3d b, b_prime;  // anti-Stokes arm
};

struct ChshResult {
  double s = 0.0;
  ChshSettings settings;
};

/// Maximal CHSH value 2 sqrt(m1 + m2) with the settings that reach it.
/// Throws ValidationError for unphysical input.
ChshResult chsh_max(const DensityMatrix& rho);

/// E(a,b) + E(a,b') + E(a',b) - E(a',b') by direct expectation values.
double chsh_value(const DensityMatrix& rho, const ChshSettings& settings);

/// Fixed textbook settings (Z/X on Stokes, (Z +/- X)/sqrt2 on anti-Stokes),
/// rotated so that the Bell state `kind` reaches 2 sqrt2.
ChshSettings canonical_chsh_settings(BellKind kind);

/// Frobenius-nearest unit-trace PSD matrix to the Hermitian part of `rho`.
DensityMatrix nearest_physical(const Matrix4c& rho);

/// rho(r, c) for every pair of basis permutation indices: out(i, j) = in(p[i], p[j]).
Matrix4c permute_basis(const Matrix4c& rho, const std::array<int, 4>& source_index);

/// Pauli matrix (0 = identity, 1 = x, 2 = y, 3 = z).
Matrix2c pauli(int index);

}  // namespace biphoton

#endif  // BIPHOTON_QUANTUM_CORE_H_
