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

#ifndef BIPHOTON_FITTING_H_
#define BIPHOTON_FITTING_H_

#include <span>

namespace biphoton {

struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 distinct x.
AffineFit fit_affine(std::span<const double> x, std::span<const double> y);

/// y = offset + amplitude * cos(2 theta - phase), the polarization-fringe form.
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;  // >= 0
  double phase = 0.0;      // radians, in (-pi, pi]
  double cos_coefficient = 0.0;
  double sin_coefficient = 0.0;

  /// (max - min) / (max + min) of the fitted curve.
  double visibility() const;
};

/// Linear least squares in (1, cos 2theta, sin 2theta). Throws ValidationError
/// for fewer than 3 distinct angles or a non-positive fitted offset.
SinusoidFit fit_fringe(std::span<const double> theta, std::span<const double> y);

}  // namespace biphoton

#endif  // BIPHOTON_FITTING_H_
