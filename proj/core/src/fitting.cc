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

#include "biphoton/fitting.h"

#include <cmath>

#include <Eigen/Dense>

#include "biphoton/quantum_core.h"

namespace biphoton {

AffineFit fit_affine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("fit_affine: need >= 2 paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_affine: x values are all equal");
  AffineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double SinusoidFit::visibility() const { return amplitude / offset; }

SinusoidFit fit_fringe(std::span<const double> theta, std::span<const double> y) {
  if (theta.size() != y.size() || theta.size() < 3) {
    throw ValidationError("fit_fringe: need >= 3 paired samples");
  }
  Eigen::MatrixXd a(theta.size(), 3);
  Eigen::VectorXd b(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(2.0 * theta[i]);
    a(i, 2) = std::sin(2.0 * theta[i]);
    b(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3) throw ValidationError("fit_fringe: angles do not determine a fringe");
  const Eigen::Vector3d c = qr.solve(b);
  SinusoidFit fit;
  fit.offset = c(0);
  fit.cos_coefficient = c(1);
  fit.sin_coefficient = c(2);
  fit.amplitude = std::hypot(c(1), c(2));
  fit.phase = std::atan2(c(2), c(1));
  if (!(fit.offset > 0.0)) throw ValidationError("fit_fringe: non-positive fitted offset");
  return fit;
}

}  // namespace biphoton
