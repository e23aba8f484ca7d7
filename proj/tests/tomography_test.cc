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

#include "biphoton/tomography.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

namespace biphoton {
namespace {

DensityMatrix random_physical(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix4c a;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) a(r, c) = Complex(g(rng), g(rng));
  const Matrix4c m = a * a.adjoint();
  return DensityMatrix::checked(m / m.trace().real());
}

/// Uhlmann fidelity between density matrices.
double uhlmann(const Matrix4c& a, const Matrix4c& b) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(a);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4c sa = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix4c> inner(sa * b * sa);
  const double tr = inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

TEST(ProjectionSet, StandardIsComplete) {
  const ProjectionSet set = standard_projection_set();
  ASSERT_EQ(set.settings.size(), 16u);
  EXPECT_EQ(set.gram_rank(), 16);
  EXPECT_LT(set.gram_condition_number(), 100.0);
  EXPECT_NO_THROW(set.validate());
  // The first four are the (H/V) x (H/V) populations.
  Matrix4c sum = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) sum += set.settings[i].projector();
  EXPECT_LT((sum - Matrix4c::Identity()).norm(), 1e-12);
  EXPECT_EQ(set.settings[4].label, "RH");
}

TEST(ProjectionSet, LabelsMatchAcceptedStates) {
  const ProjectionSet set = standard_projection_set();
  const double r = 1.0 / std::sqrt(2.0);
  auto vec = [&](char c) -> PolarizationVector {
    switch (c) {
      case 'H': return PolarizationVector::horizontal();
      case 'V': return PolarizationVector::vertical();
      case 'D': return {r, r};
      case 'R': return {r, Complex(0, -r)};
      default: return {r, Complex(0, r)};
    }
  };
  for (const auto& s : set.settings) {
    const TwoQubitState want = TwoQubitState::product(vec(s.label[0]), vec(s.label[1]));
    const Vector4c w = want.amplitudes();
    EXPECT_NEAR((s.projector() - w * w.adjoint()).norm(), 0.0, 1e-12) << s.label;
  }
}

TEST(ProjectionSet, RankDeficientRejected) {
  ProjectionSet set = standard_projection_set();
  set.settings[15] = set.settings[0];
  EXPECT_LT(set.gram_rank(), 16);
  EXPECT_THROW(set.validate(), ValidationError);
  const std::vector<double> counts(16, 10.0);
  EXPECT_THROW(linear_inversion(counts, set), ValidationError);
  EXPECT_THROW(mle_reconstruct(counts, set), ValidationError);
}

TEST(ExpectedCounts, Examples) {
  const ProjectionSet set = standard_projection_set();
  for (double n : expected_counts(DensityMatrix::maximally_mixed(), set, 1000.0)) {
    EXPECT_NEAR(n, 250.0, 1e-9);
  }
  const auto psi = expected_counts(DensityMatrix::pure(bell_state(BellKind::kPsiPlus)), set, 1000.0);
  EXPECT_NEAR(psi[0], 500.0, 1e-9);
  const std::vector<double> bg(16, 3.0);
  for (double n : expected_counts(DensityMatrix::maximally_mixed(), set, 0.0, bg)) EXPECT_EQ(n, 3.0);
}

TEST(LinearInversion, NoiselessRecoversState) {
  std::mt19937_64 rng(1);
  const ProjectionSet set = standard_projection_set();
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix rho = random_physical(rng);
    const auto n = expected_counts(rho, set, 5000.0);
    EXPECT_LT((linear_inversion(n, set) - rho.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(LinearInversion, NoisyErrorScale) {
  const ProjectionSet set = standard_projection_set();
  const DensityMatrix rho = DensityMatrix::pure(bell_state(BellKind::kPhiMinus));
  const auto n = sample_counts(expected_counts(rho, set, 1e6), 5);
  const double err = (linear_inversion(n, set) - rho.matrix()).norm();
  EXPECT_LT(err, 1e-2);
  EXPECT_GT(err, 1e-5);
}

TEST(LinearInversion, UnphysicalFluctuationsFlagged) {
  const ProjectionSet set = standard_projection_set();
  auto n = expected_counts(DensityMatrix::pure(bell_state(BellKind::kPsiPlus)), set, 1000.0);
  n[0] += 60.0;  // HH up, HV stays zero
  n[1] += 0.0;
  n[3] += 60.0;
  const DensityDiagnostics d = validate_density(linear_inversion(n, set));
  EXPECT_FALSE(d.positive());
  EXPECT_TRUE(d.hermitian());
  EXPECT_TRUE(d.unit_trace());
}

TEST(Mle, NoiselessBellState) {
  const ProjectionSet set = standard_projection_set();
  const auto psi = bell_state(BellKind::kPsiPlus);
  const auto n = expected_counts(DensityMatrix::pure(psi), set, 1e6);
  const ReconstructionResult r = mle_reconstruct(n, set);
  EXPECT_GE(fidelity(r.rho, psi).prob, 0.999);
  EXPECT_TRUE(r.rho.diagnostics().physical());
  EXPECT_LE(r.negative_log_likelihood, r.seed_negative_log_likelihood + 1e-9);
  EXPECT_NEAR(r.intensity / 1e6, 1.0, 1e-3);
}

TEST(Mle, MixedStatePurity) {
  const ProjectionSet set = standard_projection_set();
  const auto n = sample_counts(expected_counts(DensityMatrix::maximally_mixed(), set, 1e5), 3);
  const ReconstructionResult r = mle_reconstruct(n, set);
  EXPECT_GE(purity(r.rho), 0.24);
  EXPECT_LE(purity(r.rho), 0.27);
}

TEST(Mle, GaussianLikelihoodAlsoWorks) {
  const ProjectionSet set = standard_projection_set();
  const auto psi = bell_state(BellKind::kPhiPlus);
  MleConfig cfg;
  cfg.likelihood = Likelihood::kGaussian;
  const auto n = sample_counts(expected_counts(DensityMatrix::pure(psi), set, 1e5), 8);
  EXPECT_GT(fidelity(mle_reconstruct(n, set, cfg).rho, psi).prob, 0.98);
  EXPECT_EQ(parse_likelihood("gaussian"), Likelihood::kGaussian);
  EXPECT_THROW(parse_likelihood("cauchy"), ValidationError);
}

TEST(Mle, AlwaysPhysicalForArbitraryCounts) {
  const ProjectionSet set = standard_projection_set();
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> u(0, 500);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> n(16);
    for (double& x : n) x = u(rng);
    if (trial == 0) std::fill(n.begin(), n.end(), 0.0);
    const ReconstructionResult r = mle_reconstruct(n, set);
    const DensityDiagnostics d = r.rho.diagnostics();
    EXPECT_TRUE(d.physical()) << d.describe();
  }
}

TEST(Mle, Deterministic) {
  const ProjectionSet set = standard_projection_set();
  const auto n = sample_counts(expected_counts(DensityMatrix::maximally_mixed(), set, 1e4), 21);
  const auto a = mle_reconstruct(n, set), b = mle_reconstruct(n, set);
  EXPECT_EQ(a.rho.matrix(), b.rho.matrix());
}

TEST(Mle, InfidelityShrinksWithIntensity) {
  const ProjectionSet set = standard_projection_set();
  std::vector<double> medians;
  for (double intensity : {1e3, 1e4, 1e6}) {
    std::mt19937_64 rng(77);
    std::vector<double> inf;
    for (int i = 0; i < 15; ++i) {
      const DensityMatrix rho = random_physical(rng);
      const auto n = sample_counts(expected_counts(rho, set, intensity), 1000 + i);
      inf.push_back(1.0 - uhlmann(mle_reconstruct(n, set).rho.matrix(), rho.matrix()));
    }
    std::nth_element(inf.begin(), inf.begin() + 7, inf.end());
    medians.push_back(inf[7]);
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}

TEST(Mle, BackgroundInForwardModel) {
  const ProjectionSet set = standard_projection_set();
  const auto psi = bell_state(BellKind::kPsiMinus);
  const std::vector<double> bg(16, 2000.0);
  const auto n = expected_counts(DensityMatrix::pure(psi), set, 1e5, bg);
  MleConfig with_bg;
  with_bg.background = bg;
  EXPECT_GT(fidelity(mle_reconstruct(n, set, with_bg).rho, psi).prob, 0.999);
  EXPECT_LT(fidelity(mle_reconstruct(n, set).rho, psi).prob, 0.97);
}

TEST(Bootstrap, SpreadShrinksWithCounts) {
  const ProjectionSet set = standard_projection_set();
  const auto psi = bell_state(BellKind::kPsiPlus);
  const DensityMatrix rho = DensityMatrix::checked(0.9 * DensityMatrix::pure(psi).matrix() +
                                                   0.1 * Matrix4c::Identity() / 4.0);
  auto spread = [&](double intensity) {
    const auto n = sample_counts(expected_counts(rho, set, intensity), 4);
    const ReconstructionResult fit = mle_reconstruct(n, set);
    const BootstrapSummary b = bootstrap(fit, set, {}, BellKind::kPsiPlus, 40, 9);
    EXPECT_LE(b.fidelity.lo, b.fidelity.hi);
    EXPECT_EQ(b.resamples, 40);
    return b.fidelity.std;
  };
  const double wide = spread(2e3), narrow = spread(2e5);
  EXPECT_GT(wide, 3 * narrow);
  EXPECT_LT(narrow, 0.01);
}

TEST(Fixtures, LoadAndPermute) {
  const PrintedFixture phi_minus = load_printed_fixture(BellKind::kPhiMinus);
  // Printed corners become the HV/VH block.
  EXPECT_EQ(phi_minus.printed(0, 0), Complex(0.5));
  EXPECT_EQ(phi_minus.canonical(1, 1), Complex(0.5));
  EXPECT_EQ(phi_minus.canonical(2, 2), Complex(0.409));
  EXPECT_EQ(phi_minus.canonical(1, 2), Complex(-0.438, 0.008));
  EXPECT_FALSE(load_printed_fixture(BellKind::kPsiMinus).diagnostics.positive());
  EXPECT_FALSE(load_printed_fixture(BellKind::kPhiPlus).diagnostics.hermitian());
  for (BellKind k : kAllBellKinds) {
    const PrintedFixture fx = load_printed_fixture(k);
    EXPECT_NEAR(fx.printed.trace().real(), 1.0, 0.03);
    EXPECT_GT(bell_pair_overlap(fx.canonical, k), 0.9) << to_string(k);
    EXPECT_LT(bell_pair_overlap(fx.printed, k), 0.1) << to_string(k);
  }
}

TEST(Fixtures, ChshWithinTolerance) {
  for (BellKind k : kAllBellKinds) {
    const PrintedFixture fx = load_printed_fixture(k);
    const double s = fixture_chsh(fx);
    EXPECT_GE(s, 2.0);
    EXPECT_NEAR(s, fx.reported_chsh, 0.2) << to_string(k);
  }
}

TEST(Fixtures, MissingDirectory) {
  EXPECT_THROW(load_printed_fixture(BellKind::kPsiPlus, "/nonexistent"), ValidationError);
}

TEST(Simulated, NoisyScenarioFidelityBracket) {
  const ExperimentScenario sc = reference_scenario(200.0, 5);
  const ProjectionSet set = standard_projection_set();
  const TomographyCounts counts = simulate_tomography_counts(sc, set);
  const ReconstructionResult r = mle_reconstruct(counts.counts, set);
  const double f = fidelity(r.rho, bell_state(BellKind::kPsiPlus)).prob;
  EXPECT_GE(f, 0.88);
  EXPECT_LE(f, 0.97);
}

}  // namespace
}  // namespace biphoton
