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

#ifndef BIPHOTON_TOMOGRAPHY_H_
#define BIPHOTON_TOMOGRAPHY_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "biphoton/coincidence.h"
#include "biphoton/polarization_optics.h"
#include "biphoton/quantum_core.h"

namespace biphoton {

struct ProjectionSetting {
  std::string label;  // e.g. "HV": Stokes H, anti-Stokes V
  AnalyzerSetting stokes;
  AnalyzerSetting anti_stokes;

  /// |a_s a_as><a_s a_as| in the canonical basis.
  Matrix4c projector() const;
};

struct ProjectionSet {
  std::vector<ProjectionSetting> settings;

  std::vector<Matrix4c> projectors() const;
  /// Rank of the Gram matrix Tr(P_i P_j).
  int gram_rank() const;
  /// Ratio of extreme singular values of the Gram matrix.
  double gram_condition_number() const;
  /// Throws ValidationError unless there are 16 settings with a rank-16 Gram matrix.
  void validate() const;
};

/// The standard 16 product settings HH, HV, VV, VH, RH, RV, DV, DH, DR, DD,
/// RD, HD, VD, VL, HL, RL, realized with a QWP followed by an HWP.
ProjectionSet standard_projection_set();

struct TomographyCounts {
  std::vector<double> counts;         // one entry per setting
  double acquisition_s = 1.0;         // per setting
  double singles_stokes = 0.0;        // singles/s, informational
  double singles_anti_stokes = 0.0;

  void validate(std::size_t settings) const;
};

/// n_i = intensity * Tr(rho P_i) + background_i. An empty background means zero.
std::vector<double> expected_counts(const DensityMatrix& rho, const ProjectionSet& set,
                                    double intensity,
                                    std::span<const double> background = {});

/// Hermitian, trace-one solution of the linear counts model; may be non-PSD.
/// Throws ValidationError for a rank-deficient set.
Matrix4c linear_inversion(std::span<const double> counts, const ProjectionSet& set,
                          std::span<const double> background = {});

enum class Likelihood { kPoisson, kGaussian };

std::string to_string(Likelihood likelihood);
Likelihood parse_likelihood(const std::string& name);

struct MleConfig {
  Likelihood likelihood = Likelihood::kPoisson;
  double gradient_tolerance = 1e-8;
  double parameter_tolerance = 1e-10;
  int max_iterations = 2000;
  int restarts = 2;                 // random starts besides the linear-inversion seed
  std::uint64_t seed = 1;
  std::vector<double> background;   // expected accidentals per setting, may be empty

  void validate() const;
};

struct ReconstructionResult {
  DensityMatrix rho;
  double negative_log_likelihood = 0.0;  // at the optimum, constant terms dropped
  double seed_negative_log_likelihood = 0.0;  // at the physical linear-inversion seed
  int iterations = 0;
  bool converged = false;
  double intensity = 0.0;  // Tr(T^dagger T)
};

/// Maximum likelihood over rho = T^dagger T / Tr(T^dagger T), T lower triangular
/// with real diagonal. Deterministic in config.seed.
ReconstructionResult mle_reconstruct(std::span<const double> counts, const ProjectionSet& set,
                                     const MleConfig& config = {});

double purity(const DensityMatrix& rho);

/// Independent Poisson draws around `expected`.
std::vector<double> sample_counts(std::span<const double> expected, std::uint64_t seed);

/// Analytic windowed coincidences of `scenario` at every setting, Poisson sampled.
TomographyCounts simulate_tomography_counts(const ExperimentScenario& scenario,
                                            const ProjectionSet& set,
                                            CoincidenceWindow window = {});

struct Interval {
  double mean = 0.0;
  double std = 0.0;
  double lo = 0.0;   // 2.5 %
  double hi = 0.0;   // 97.5 %
};

struct BootstrapSummary {
  int resamples = 0;
  Interval fidelity;
  Interval chsh;
  Interval purity;
};

/// Parametric bootstrap: resample Poisson counts from the fitted model and
/// reconstruct each resample.
BootstrapSummary bootstrap(const ReconstructionResult& fit, const ProjectionSet& set,
                           const MleConfig& config, BellKind target, int resamples = 250,
                           std::uint64_t seed = 11);

struct PrintedFixture {
  BellKind kind = BellKind::kPsiPlus;
  std::array<std::string, 4> printed_basis_order;
  std::array<int, 4> source_index{};  // canonical i <- printed source_index[i]
  Matrix4c printed;                   // as printed
  Matrix4c canonical;                 // permuted to (HH, HV, VH, VV)
  DensityDiagnostics diagnostics;     // of the canonical matrix, never repaired
  double reported_chsh = 0.0;

  DensityMatrix density() const { return DensityMatrix::unchecked(canonical); }
};

/// Reads `<dir>/<snake_name>.json`. Throws ValidationError on a missing or
/// malformed file.
PrintedFixture load_printed_fixture(BellKind kind, const std::string& dir = BIPHOTON_FIXTURE_DIR);

/// Horodecki S of an ingested matrix after projection onto the physical set.
double fixture_chsh(const PrintedFixture& fixture);

/// Weight of the dominant eigenvector of rho's Hermitian part inside the
/// span of the Bell pair containing `kind` ({HH, VV} or {HV, VH}).
double bell_pair_overlap(const Matrix4c& rho, BellKind kind);

}  // namespace biphoton

#endif  // BIPHOTON_TOMOGRAPHY_H_
