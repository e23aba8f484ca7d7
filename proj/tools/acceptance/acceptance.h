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

#ifndef BIPHOTON_TOOLS_ACCEPTANCE_H_
#define BIPHOTON_TOOLS_ACCEPTANCE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "biphoton/quantum_core.h"

namespace biphoton::acceptance {

inline constexpr int kCriteria = 10;

/// One checked quantity. Informational rows never fail.
struct Row {
  int criterion = 0;
  std::string quantity;
  std::string reference;   // reported or derived value
  double value = 0.0;
  std::string tolerance;
  bool pass = true;
  bool info = false;
};

const char* title(int criterion);
std::string format_value(double v);
bool all_pass(const std::vector<Row>& rows, int criterion);

// 1. Cauchy-Schwarz arithmetic.
std::vector<Row> cauchy_schwarz_rows();

// 2. End-to-end g2 from synthetic time tags.
struct G2Summary {
  double duration_s = 0.0;
  double peak = 0.0;
  double peak_tau_ns = 0.0;
  double window = 0.0;
};
G2Summary run_g2(double duration_s, std::uint64_t seed);
std::vector<Row> g2_rows(const G2Summary& s, bool info = false);

// 3. Bell-state table.
std::vector<Row> bell_table_rows();

// 4. Lock ratio and set-point linearity.
struct LockSummary {
  double ratio = 0.0;
  double r_squared = 0.0;
};
LockSummary run_lock();
std::vector<Row> lock_rows(const LockSummary& s);

// 5. Coherence-time calibration.
std::vector<Row> coherence_rows();

// 6. Tomography round trip over random states.
/// `timed` adds the wall-clock runtime row, which is not reproducible.
std::vector<Row> tomography_rows(int states = 100, std::uint64_t seed = 2026, bool timed = true);

// 7. Printed density-matrix fixtures.
struct FixtureSummary {
  BellKind kind = BellKind::kPsiPlus;
  double chsh = 0.0;
  double reported_chsh = 0.0;
  double fidelity_prob = 0.0;
};
std::vector<FixtureSummary> run_fixtures();
std::vector<Row> fixture_rows(const std::vector<FixtureSummary>& fixtures);

// 8. Visibility chain.
std::vector<Row> visibility_rows();

// 9. Brightness accounting.
std::vector<Row> brightness_rows();

// 10. Property suite.
std::vector<Row> property_rows();

/// Rows for one criterion, all computed in-process. Criterion 2 also carries
/// informational rows for a 50 s run.
std::vector<Row> run_criterion(int criterion);

}  // namespace biphoton::acceptance

#endif  // BIPHOTON_TOOLS_ACCEPTANCE_H_
