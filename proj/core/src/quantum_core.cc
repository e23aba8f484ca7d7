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

#include "biphoton/quantum_core.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace biphoton {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Vector4c kron(const Vector2c& a, const Vector2c& b) {
  Vector4c out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix4c hermitian_part(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

Matrix2c bloch_observable(const Eigen::Vector3d& n) {
  return n(0) * pauli(1) + n(1) * pauli(2) + n(2) * pauli(3);
}

void require_valid(const DensityMatrix& rho, InputPolicy policy, bool need_psd,
                   const char* op) {
  if (policy == InputPolicy::kIngested) return;
  const DensityDiagnostics d = rho.diagnostics();
  const bool ok = d.hermitian() && d.unit_trace() && (!need_psd || d.positive());
  if (!ok) {
    throw ValidationError(std::string(op) + ": invalid density matrix (" + d.describe() + ")");
  }
}

}  // namespace

PolarizationVector::PolarizationVector(Complex h, Complex v) : amps_(h, v) {
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("PolarizationVector: zero or non-finite amplitudes");
  }
  amps_ /= n;
}

PolarizationVector PolarizationVector::linear(double theta) {
  return {std::cos(theta), std::sin(theta)};
}

PolarizationVector PolarizationVector::circular_plus() {
  return {kInvSqrt2, Complex(0.0, kInvSqrt2)};
}

PolarizationVector PolarizationVector::circular_minus() {
  return {kInvSqrt2, Complex(0.0, -kInvSqrt2)};
}

TwoQubitState::TwoQubitState(const Vector4c& amplitudes) : amps_(amplitudes) {
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("TwoQubitState: zero or non-finite amplitudes");
  }
  amps_ /= n;
}

TwoQubitState TwoQubitState::product(const PolarizationVector& stokes,
                                     const PolarizationVector& anti_stokes) {
  return TwoQubitState(kron(stokes.amplitudes(), anti_stokes.amplitudes()));
}

std::string DensityDiagnostics::describe() const {
  std::ostringstream os;
  os << "hermiticity_residual=" << hermiticity_residual << " trace_residual=" << trace_residual
     << " min_eigenvalue=" << min_eigenvalue << " purity=" << purity;
  return os.str();
}

DensityDiagnostics validate_density(const Matrix4c& rho) {
  DensityDiagnostics d;
  d.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_residual = std::abs(rho.trace() - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(hermitian_part(rho), Eigen::EigenvaluesOnly);
  d.min_eigenvalue = eig.eigenvalues().minCoeff();
  d.purity = (rho * rho).trace().real();
  return d;
}

DensityMatrix DensityMatrix::checked(const Matrix4c& rho) {
  const DensityDiagnostics d = validate_density(rho);
  if (!d.physical()) {
    throw ValidationError("DensityMatrix: unphysical matrix (" + d.describe() + ")");
  }
  return DensityMatrix(rho);
}

DensityMatrix DensityMatrix::unchecked(const Matrix4c& rho) { return DensityMatrix(rho); }

DensityMatrix DensityMatrix::pure(const TwoQubitState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

std::string to_string(BellKind kind) {
  switch (kind) {
    case BellKind::kPsiPlus: return "PsiPlus";
    case BellKind::kPsiMinus: return "PsiMinus";
    case BellKind::kPhiPlus: return "PhiPlus";
    case BellKind::kPhiMinus: return "PhiMinus";
  }
  return "?";
}

BellKind parse_bell_kind(const std::string& name) {
  std::string key;
  for (char c : name) {
    if (c == '_' || c == ' ') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "psiplus" || key == "psi+") return BellKind::kPsiPlus;
  if (key == "psiminus" || key == "psi-") return BellKind::kPsiMinus;
  if (key == "phiplus" || key == "phi+") return BellKind::kPhiPlus;
  if (key == "phiminus" || key == "phi-") return BellKind::kPhiMinus;
  throw ValidationError("unknown Bell state '" + name + "'");
}

TwoQubitState bell_state(BellKind kind) {
  Vector4c v = Vector4c::Zero();
  switch (kind) {
    case BellKind::kPsiPlus: v << 1, 0, 0, 1; break;
    case BellKind::kPsiMinus: v << 1, 0, 0, -1; break;
    case BellKind::kPhiPlus: v << 0, 1, 1, 0; break;
    case BellKind::kPhiMinus: v << 0, 1, -1, 0; break;
  }
  return TwoQubitState(v * kInvSqrt2);
}

Fidelity fidelity(const DensityMatrix& rho, const TwoQubitState& target, InputPolicy policy) {
  require_valid(rho, policy, /*need_psd=*/false, "fidelity");
  const Vector4c& psi = target.amplitudes();
  Fidelity f;
  f.prob = psi.dot(hermitian_part(rho.matrix()) * psi).real();
  f.sqrt = std::sqrt(std::max(f.prob, 0.0));
  return f;
}

double overlap(const TwoQubitState& a, const TwoQubitState& b) {
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

double projection_probability(const DensityMatrix& rho, const PolarizationVector& analyzer_s,
                              const PolarizationVector& analyzer_as) {
  const Vector4c a = kron(analyzer_s.amplitudes(), analyzer_as.amplitudes());
  return a.dot(rho.matrix() * a).real();
}

double projection_probability(const TwoQubitState& psi, const PolarizationVector& analyzer_s,
                              const PolarizationVector& analyzer_as) {
  const Vector4c a = kron(analyzer_s.amplitudes(), analyzer_as.amplitudes());
  return std::norm(a.dot(psi.amplitudes()));
}

Matrix2c pauli(int index) {
  Matrix2c m;
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli index");
  }
  return m;
}

Eigen::Matrix3d correlation_tensor(const Matrix4c& rho) {
  const Matrix4c h = hermitian_part(rho);
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (h * kron(pauli(i + 1), pauli(j + 1))).trace().real();
  return t;
}

ChshResult chsh_max(const DensityMatrix& rho) {
  require_valid(rho, InputPolicy::kStrict, /*need_psd=*/true, "chsh_max");
  const Eigen::Matrix3d t = correlation_tensor(rho.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(t.transpose() * t);
  // Eigenvalues ascending.
  const double m1 = std::max(eig.eigenvalues()(2), 0.0);
  const double m2 = std::max(eig.eigenvalues()(1), 0.0);
  const Eigen::Vector3d c1 = eig.eigenvectors().col(2);
  const Eigen::Vector3d c2 = eig.eigenvectors().col(1);

  ChshResult out;
  out.s = 2.0 * std::sqrt(m1 + m2);

  const double theta = (m1 > 0.0) ? std::atan2(std::sqrt(m2), std::sqrt(m1)) : 0.0;
  const Eigen::Vector3d sum = 2.0 * std::cos(theta) * c1;   // b + b'
  const Eigen::Vector3d diff = 2.0 * std::sin(theta) * c2;  // b - b'
  ChshSettings& st = out.settings;
  st.b = 0.5 * (sum + diff);
  st.b_prime = 0.5 * (sum - diff);
  const auto unit_or = [](const Eigen::Vector3d& v, const Eigen::Vector3d& fallback) {
    const double n = v.norm();
    return n > 1e-300 ? Eigen::Vector3d(v / n) : fallback;
  };
  st.b = unit_or(st.b, Eigen::Vector3d::UnitZ());
  st.b_prime = unit_or(st.b_prime, Eigen::Vector3d::UnitX());
  st.a = unit_or(t * (st.b + st.b_prime), Eigen::Vector3d::UnitZ());
  st.a_prime = unit_or(t * (st.b - st.b_prime), Eigen::Vector3d::UnitX());
  return out;
}

double chsh_value(const DensityMatrix& rho, const ChshSettings& st) {
  const auto e = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return (rho.matrix() * kron(bloch_observable(a), bloch_observable(b))).trace().real();
  };
  return e(st.a, st.b) + e(st.a, st.b_prime) + e(st.a_prime, st.b) - e(st.a_prime, st.b_prime);
}

ChshSettings canonical_chsh_settings(BellKind kind) {
  const Eigen::Matrix3d t = correlation_tensor(DensityMatrix::pure(bell_state(kind)).matrix());
  const double sx = t(0, 0) >= 0.0 ? 1.0 : -1.0;
  const double sz = t(2, 2) >= 0.0 ? 1.0 : -1.0;
  ChshSettings st;
  st.a = Eigen::Vector3d::UnitZ();
  st.a_prime = Eigen::Vector3d::UnitX();
  st.b = Eigen::Vector3d(sx, 0.0, sz) * kInvSqrt2;
  st.b_prime = Eigen::Vector3d(-sx, 0.0, sz) * kInvSqrt2;
  return st;
}

DensityMatrix nearest_physical(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> eig(hermitian_part(rho));
  Eigen::Vector4d lambda = eig.eigenvalues();
  const double tr = lambda.sum();
  if (!(tr > 0.0)) throw ValidationError("nearest_physical: non-positive trace");
  lambda /= tr;

  // Eigenvalues ascending: zero the most negative ones and spread their
  // weight evenly over the rest until what remains is non-negative.
  double accumulated = 0.0;
  int first_kept = 0;
  while (first_kept < 4 && lambda(first_kept) + accumulated / (4 - first_kept) < 0.0) {
    accumulated += lambda(first_kept);
    lambda(first_kept) = 0.0;
    ++first_kept;
  }
  for (int i = first_kept; i < 4; ++i) lambda(i) += accumulated / (4 - first_kept);

  const Matrix4c out = eig.eigenvectors() * lambda.cast<Complex>().asDiagonal() *
                       eig.eigenvectors().adjoint();
  return DensityMatrix::unchecked(hermitian_part(out));
}

Matrix4c permute_basis(const Matrix4c& rho, const std::array<int, 4>& source_index) {
  std::array<int, 4> sorted = source_index;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 4>{0, 1, 2, 3}) {
    throw ValidationError("permute_basis: not a permutation of 0..3");
  }
  Matrix4c out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = rho(source_index[i], source_index[j]);
  return out;
}

}  // namespace biphoton
