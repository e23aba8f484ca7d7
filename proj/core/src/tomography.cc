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
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <ceres/ceres.h>

#include "json.hpp"

namespace biphoton {

namespace {

constexpr int kParams = 16;

struct PolarizationAngles {
  char name;
  double qwp_deg;
  double hwp_deg;
};

constexpr std::array<PolarizationAngles, 5> kAngles = {{
    {'H', 0.0, 0.0},
    {'V', 0.0, 45.0},
    {'D', 45.0, 22.5},
    {'R', 0.0, 67.5},
    {'L', 0.0, 22.5},
}};

AnalyzerSetting setting_for(char name) {
  for (const auto& a : kAngles) {
    if (a.name == name) return AnalyzerSetting{a.qwp_deg, a.hwp_deg, PbsPort::kTransmit};
  }
  throw ValidationError(std::string("unknown polarization label ") + name);
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

const std::array<Matrix4c, 16>& pauli_products() {
  static const std::array<Matrix4c, 16> ops = [] {
    std::array<Matrix4c, 16> out;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[4 * j + k] = kron(pauli(j), pauli(k));
    return out;
  }();
  return ops;
}

Eigen::MatrixXd gram_matrix(const std::vector<Matrix4c>& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = (p[i] * p[j]).trace().real();
  return g;
}

/// Lower-triangular T with real diagonal from 16 reals.
Matrix4c unpack(const double* x) {
  Matrix4c t = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) t(i, i) = x[i];
  int k = 4;
  for (int r = 1; r < 4; ++r) {
    for (int c = 0; c < r; ++c, k += 2) t(r, c) = Complex(x[k], x[k + 1]);
  }
  return t;
}

std::array<double, kParams> pack(const Matrix4c& t) {
  std::array<double, kParams> x{};
  for (int i = 0; i < 4; ++i) x[i] = t(i, i).real();
  int k = 4;
  for (int r = 1; r < 4; ++r) {
    for (int c = 0; c < r; ++c, k += 2) {
      x[k] = t(r, c).real();
      x[k + 1] = t(r, c).imag();
    }
  }
  return x;
}

/// Lower-triangular T with T^dagger T = m, for positive definite m.
Matrix4c lower_factor(const Matrix4c& m) {
  // Reversing the basis turns the Cholesky factor of m into an upper factor.
  Eigen::PermutationMatrix<4> j;
  j.indices() << 3, 2, 1, 0;
  const Matrix4c flipped = j * m * j.transpose();
  const Eigen::LLT<Matrix4c> llt(flipped);
  if (llt.info() != Eigen::Success) throw ValidationError("lower_factor: not positive definite");
  const Matrix4c upper = j.transpose() * Matrix4c(llt.matrixL()) * j;  // m = U U^dagger
  Matrix4c t = upper.adjoint();
  // Make the diagonal real and non-negative.
  for (int i = 0; i < 4; ++i) {
    const Complex d = t(i, i);
    if (std::abs(d) > 0.0) t.row(i) *= std::conj(d) / std::abs(d);
  }
  return t;
}

/// Negative log-likelihood in units where counts sum to one.
class Objective final : public ceres::FirstOrderFunction {
 public:
  Objective(std::vector<Matrix4c> projectors, std::vector<double> counts,
            std::vector<double> background, Likelihood likelihood, double scale)
      : p_(std::move(projectors)),
        n_(std::move(counts)),
        b_(std::move(background)),
        likelihood_(likelihood),
        scale_(scale) {}

  int NumParameters() const override { return kParams; }

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const Matrix4c t = unpack(x);
    const Matrix4c m4 = t.adjoint() * t;
    double f = 0.0;
    Matrix4c g = Matrix4c::Zero();
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const double m = scale_ * (m4 * p_[i]).trace().real() + b_[i];
      const double n = n_[i];
      double dfdm = 0.0;
      if (likelihood_ == Likelihood::kPoisson) {
        if (n > 0.0) {
          if (!(m > 0.0)) return false;
          f += m - n * std::log(m);
          dfdm = 1.0 - n / m;
        } else {
          f += m;
          dfdm = 1.0;
        }
      } else {
        const double w = std::max(n, 1.0);
        f += (m - n) * (m - n) / (2.0 * w);
        dfdm = (m - n) / w;
      }
      g += dfdm * p_[i];
    }
    *cost = f / scale_;
    if (gradient != nullptr) {
      const Matrix4c tg = t * g;  // d Tr(T^dagger T G) = 2 Re Tr(dT^dagger T G)
      for (int i = 0; i < 4; ++i) gradient[i] = 2.0 * tg(i, i).real();
      int k = 4;
      for (int r = 1; r < 4; ++r) {
        for (int c = 0; c < r; ++c, k += 2) {
          gradient[k] = 2.0 * tg(r, c).real();
          gradient[k + 1] = 2.0 * tg(r, c).imag();
        }
      }
    }
    return true;
  }

 private:
  std::vector<Matrix4c> p_;
  std::vector<double> n_;
  std::vector<double> b_;
  Likelihood likelihood_;
  double scale_;
};

std::vector<double> background_or_zero(std::span<const double> background, std::size_t n) {
  if (background.empty()) return std::vector<double>(n, 0.0);
  if (background.size() != n) throw ValidationError("background size does not match the set");
  for (double b : background) {
    if (!(b >= 0.0) || !std::isfinite(b)) throw ValidationError("background must be >= 0");
  }
  return {background.begin(), background.end()};
}

void check_counts(std::span<const double> counts, std::size_t n) {
  if (counts.size() != n) {
    std::ostringstream os;
    os << "expected " << n << " counts, got " << counts.size();
    throw ValidationError(os.str());
  }
  for (double c : counts) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("counts must be finite and >= 0");
  }
}

Interval summarize(std::vector<double> v) {
  Interval out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  std::sort(v.begin(), v.end());
  const auto at = [&](double q) {
    return v[static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)))];
  };
  out.lo = at(0.025);
  out.hi = at(0.975);
  return out;
}

std::string snake_name(BellKind kind) {
  switch (kind) {
    case BellKind::kPsiPlus: return "psi_plus";
    case BellKind::kPsiMinus: return "psi_minus";
    case BellKind::kPhiPlus: return "phi_plus";
    case BellKind::kPhiMinus: return "phi_minus";
  }
  return "";
}

}  // namespace

Matrix4c ProjectionSetting::projector() const {
  const Vector2c s = analyzer_projector(stokes.chain()).amplitudes();
  const Vector2c a = analyzer_projector(anti_stokes.chain()).amplitudes();
  Vector4c v;
  v << s(0) * a(0), s(0) * a(1), s(1) * a(0), s(1) * a(1);
  return v * v.adjoint();
}

std::vector<Matrix4c> ProjectionSet::projectors() const {
  std::vector<Matrix4c> out;
  out.reserve(settings.size());
  for (const auto& s : settings) out.push_back(s.projector());
  return out;
}

int ProjectionSet::gram_rank() const {
  if (settings.empty()) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram_matrix(projectors()));
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

double ProjectionSet::gram_condition_number() const {
  if (settings.empty()) return std::numeric_limits<double>::infinity();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram_matrix(projectors()));
  const auto& sv = svd.singularValues();
  const double lo = sv(sv.size() - 1);
  return lo > 0.0 ? sv(0) / lo : std::numeric_limits<double>::infinity();
}

void ProjectionSet::validate() const {
  if (settings.size() != 16) {
    throw ValidationError("ProjectionSet: need 16 settings, got " +
                          std::to_string(settings.size()));
  }
  const int rank = gram_rank();
  if (rank != 16) {
    throw ValidationError("ProjectionSet: rank-deficient Gram matrix (rank " +
                          std::to_string(rank) + ")");
  }
}

ProjectionSet standard_projection_set() {
  static constexpr std::array<const char*, 16> kLabels = {
      "HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
      "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
  ProjectionSet set;
  for (const char* l : kLabels) {
    set.settings.push_back({l, setting_for(l[0]), setting_for(l[1])});
  }
  return set;
}

void TomographyCounts::validate(std::size_t settings) const {
  check_counts(counts, settings);
  if (!(acquisition_s > 0.0)) throw ValidationError("TomographyCounts: acquisition time must be > 0");
  if (!(singles_stokes >= 0.0) || !(singles_anti_stokes >= 0.0)) {
    throw ValidationError("TomographyCounts: singles rates must be >= 0");
  }
}

std::vector<double> expected_counts(const DensityMatrix& rho, const ProjectionSet& set,
                                    double intensity, std::span<const double> background) {
  if (!(intensity >= 0.0)) throw ValidationError("expected_counts: intensity must be >= 0");
  const auto b = background_or_zero(background, set.settings.size());
  std::vector<double> out;
  out.reserve(set.settings.size());
  for (std::size_t i = 0; i < set.settings.size(); ++i) {
    const double p = (rho.matrix() * set.settings[i].projector()).trace().real();
    out.push_back(intensity * std::max(p, 0.0) + b[i]);
  }
  return out;
}

Matrix4c linear_inversion(std::span<const double> counts, const ProjectionSet& set,
                          std::span<const double> background) {
  check_counts(counts, set.settings.size());
  const auto b = background_or_zero(background, set.settings.size());
  const auto p = set.projectors();
  const auto& ops = pauli_products();
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd a(n, 16);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < 16; ++k) a(i, k) = (p[i] * ops[k]).trace().real() / 4.0;
    y(i) = counts[i] - b[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < 16) throw ValidationError("linear_inversion: rank-deficient projection set");
  const Eigen::VectorXd x = qr.solve(y);
  if (!(std::abs(x(0)) > 0.0)) throw ValidationError("linear_inversion: zero total intensity");
  Matrix4c rho = Matrix4c::Zero();
  for (int k = 0; k < 16; ++k) rho += x(k) * ops[k];
  rho /= 4.0 * x(0);
  return 0.5 * (rho + rho.adjoint());
}

std::string to_string(Likelihood likelihood) {
  return likelihood == Likelihood::kPoisson ? "poisson" : "gaussian";
}

Likelihood parse_likelihood(const std::string& name) {
  if (name == "poisson") return Likelihood::kPoisson;
  if (name == "gaussian") return Likelihood::kGaussian;
  throw ValidationError("unknown likelihood '" + name + "' (expected poisson or gaussian)");
}

void MleConfig::validate() const {
  if (!(gradient_tolerance > 0.0) || !(parameter_tolerance > 0.0)) {
    throw ValidationError("MleConfig: tolerances must be > 0");
  }
  if (max_iterations <= 0) throw ValidationError("MleConfig: max_iterations must be > 0");
  if (restarts < 0) throw ValidationError("MleConfig: restarts must be >= 0");
}

ReconstructionResult mle_reconstruct(std::span<const double> counts, const ProjectionSet& set,
                                     const MleConfig& config) {
  config.validate();
  set.validate();
  check_counts(counts, set.settings.size());
  const auto b = background_or_zero(config.background, set.settings.size());
  const auto projectors = set.projectors();

  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double scale = std::max(total, 1.0);

  // Physical seed from linear inversion, scaled to the observed intensity.
  Matrix4c seed_rho;
  try {
    seed_rho = nearest_physical(linear_inversion(counts, set, b)).matrix();
  } catch (const ValidationError&) {
    seed_rho = Matrix4c::Identity() / 4.0;
  }
  seed_rho = 0.999 * seed_rho + 0.001 * Matrix4c::Identity() / 4.0;
  double predicted = 0.0, signal = 0.0;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    predicted += (seed_rho * projectors[i]).trace().real();
    signal += std::max(counts[i] - b[i], 0.0);
  }
  const double seed_intensity = std::max(signal, 1e-6 * scale) / std::max(predicted, 1e-12) / scale;

  ceres::GradientProblem problem(
      new Objective(projectors, {counts.begin(), counts.end()}, b, config.likelihood, scale));
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = config.max_iterations;
  options.gradient_tolerance = config.gradient_tolerance;
  options.parameter_tolerance = config.parameter_tolerance;
  options.function_tolerance = 1e-16;
  options.logging_type = ceres::SILENT;

  std::vector<std::array<double, kParams>> starts;
  starts.push_back(pack(lower_factor(seed_intensity * seed_rho)));
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < config.restarts; ++r) {
    std::array<double, kParams> x{};
    for (double& v : x) v = gauss(rng);
    for (int i = 0; i < 4; ++i) x[i] = std::abs(x[i]) + 0.1;
    const Matrix4c t = unpack(x.data());
    const double norm = (t.adjoint() * t).trace().real();
    const double f = std::sqrt(seed_intensity / norm);
    for (double& v : x) v *= f;
    starts.push_back(x);
  }

  ReconstructionResult best;
  best.negative_log_likelihood = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::array<double, kParams> x = starts[s];
    double start_cost = 0.0;
    if (s == 0 && problem.Evaluate(x.data(), &start_cost, nullptr)) {
      best.seed_negative_log_likelihood = start_cost * scale;
    }
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, x.data(), &summary);
    const bool converged = summary.termination_type == ceres::CONVERGENCE;
    any_converged = any_converged || converged;
    double cost = 0.0;
    if (!problem.Evaluate(x.data(), &cost, nullptr)) continue;
    if (cost * scale < best.negative_log_likelihood) {
      const Matrix4c t = unpack(x.data());
      const Matrix4c m = t.adjoint() * t;
      const double tr = m.trace().real();
      if (!(tr > 0.0)) continue;
      Matrix4c rho = m / tr;
      rho = 0.5 * (rho + rho.adjoint());
      best.rho = DensityMatrix::unchecked(rho);
      best.negative_log_likelihood = cost * scale;
      best.iterations = static_cast<int>(summary.iterations.size());
      best.intensity = tr * scale;
    }
  }
  best.converged = any_converged;
  const DensityDiagnostics d = best.rho.diagnostics();
  if (!d.physical()) throw std::logic_error("mle_reconstruct: produced " + d.describe());
  return best;
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

std::vector<double> sample_counts(std::span<const double> expected, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(expected.size());
  for (double e : expected) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw ValidationError("sample_counts: bad mean");
    std::poisson_distribution<long long> d(e);
    out.push_back(e > 0.0 ? static_cast<double>(d(rng)) : 0.0);
  }
  return out;
}

TomographyCounts simulate_tomography_counts(const ExperimentScenario& scenario,
                                            const ProjectionSet& set, CoincidenceWindow window) {
  set.validate();
  std::vector<double> expected;
  for (const auto& s : set.settings) {
    ExperimentScenario sc = scenario;
    sc.analyzer_stokes = s.stokes;
    sc.analyzer_anti_stokes = s.anti_stokes;
    expected.push_back(expected_window_coincidences(sc, window));
  }
  TomographyCounts out;
  out.counts = sample_counts(expected, scenario.seed);
  out.acquisition_s = scenario.duration_s;
  return out;
}

BootstrapSummary bootstrap(const ReconstructionResult& fit, const ProjectionSet& set,
                           const MleConfig& config, BellKind target, int resamples,
                           std::uint64_t seed) {
  if (resamples <= 0) throw ValidationError("bootstrap: resamples must be > 0");
  const auto b = background_or_zero(config.background, set.settings.size());
  const auto model = expected_counts(fit.rho, set, fit.intensity, b);
  const TwoQubitState psi = bell_state(target);
  MleConfig inner = config;
  inner.restarts = 0;
  std::vector<double> f, s, p;
  std::seed_seq seq{seed};
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(resamples));
  seq.generate(seeds.begin(), seeds.end());
  for (int r = 0; r < resamples; ++r) {
    const auto counts = sample_counts(model, seeds[static_cast<std::size_t>(r)]);
    const ReconstructionResult rr = mle_reconstruct(counts, set, inner);
    f.push_back(fidelity(rr.rho, psi).prob);
    s.push_back(chsh_max(rr.rho).s);
    p.push_back(purity(rr.rho));
  }
  BootstrapSummary out;
  out.resamples = resamples;
  out.fidelity = summarize(f);
  out.chsh = summarize(s);
  out.purity = summarize(p);
  return out;
}

PrintedFixture load_printed_fixture(BellKind kind, const std::string& dir) {
  const std::string path = dir + "/" + snake_name(kind) + ".json";
  std::ifstream in(path);
  if (!in) throw ValidationError("load_printed_fixture: cannot open " + path);
  PrintedFixture fx;
  fx.kind = kind;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (parse_bell_kind(j.at("name").get<std::string>()) != kind) {
      throw ValidationError("load_printed_fixture: " + path + " names a different state");
    }
    const auto order = j.at("printed_basis_order").get<std::vector<std::string>>();
    const auto index = j.at("source_index").get<std::vector<int>>();
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    if (order.size() != 4 || index.size() != 4 || re.size() != 4 || im.size() != 4) {
      throw ValidationError("load_printed_fixture: " + path + " is not 4x4");
    }
    std::array<bool, 4> seen{};
    for (int i = 0; i < 4; ++i) {
      if (index[i] < 0 || index[i] > 3 || seen[index[i]]) {
        throw ValidationError("load_printed_fixture: source_index is not a permutation");
      }
      seen[index[i]] = true;
      fx.printed_basis_order[i] = order[i];
      fx.source_index[i] = index[i];
      if (re[i].size() != 4 || im[i].size() != 4) {
        throw ValidationError("load_printed_fixture: " + path + " is not 4x4");
      }
      for (int c = 0; c < 4; ++c) fx.printed(i, c) = Complex(re[i][c], im[i][c]);
    }
    // The permutation must land each printed label on the canonical one.
    for (int i = 0; i < 4; ++i) {
      if (order[fx.source_index[i]] != kCanonicalBasis[i]) {
        throw ValidationError("load_printed_fixture: source_index disagrees with basis labels");
      }
    }
    fx.reported_chsh = j.at("reported_chsh").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_printed_fixture: malformed " + path + ": " + e.what());
  }
  fx.canonical = permute_basis(fx.printed, fx.source_index);
  fx.diagnostics = validate_density(fx.canonical);
  return fx;
}

double fixture_chsh(const PrintedFixture& fixture) {
  return chsh_max(nearest_physical(fixture.canonical)).s;
}

double bell_pair_overlap(const Matrix4c& rho, BellKind kind) {
  const Matrix4c h = 0.5 * (rho + rho.adjoint());
  const Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
  const bool psi = kind == BellKind::kPsiPlus || kind == BellKind::kPsiMinus;
  const std::array<int, 2> pair = psi ? std::array<int, 2>{0, 3} : std::array<int, 2>{1, 2};
  double sum = 0.0;
  for (int k : pair) sum += std::norm(es.eigenvectors()(k, 3));
  return sum;
}

}  // namespace biphoton
