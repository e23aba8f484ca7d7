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

#ifndef BIPHOTON_TOOLS_CONFIG_H_
#define BIPHOTON_TOOLS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/biphoton_spectrum.h"
#include "biphoton/coincidence.h"
#include "biphoton/phase_lock.h"
#include "biphoton/quantum_core.h"
#include "biphoton/tomography.h"

namespace biphoton::cli {

inline constexpr int kSchemaVersion = 1;

/// Bad config file: unreadable, wrong schema, unknown key or out-of-range value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TomographyOptions {
  enum class Source { kScenario, kIdeal };
  Source source = Source::kScenario;
  double intensity = 1e6;      // ideal source: expected counts per unit probability
  bool sample = true;          // ideal source: Poisson-sample the expected counts
  BellKind target = BellKind::kPsiPlus;
  MleConfig mle;
  int bootstrap_resamples = 100;
  CoincidenceWindow window;
};

struct LockOptions {
  LockSimulation simulation;
  std::vector<double> setpoints;  // target SFWM phases, radians
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::optional<std::string> output_dir;
  ExperimentScenario scenario;
  SpectralModelParams spectral;
  LockOptions lock;
  TomographyOptions tomography;
  bool write_csv = false;
};

/// Parses and validates a YAML document. Throws ConfigError naming the field.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Config with every section at its default (reference scenario, 1000 s).
ScenarioConfig default_config();

/// Replaces every seed in the config.
void apply_seed(ScenarioConfig& cfg, std::uint64_t seed);

}  // namespace biphoton::cli

#endif  // BIPHOTON_TOOLS_CONFIG_H_
