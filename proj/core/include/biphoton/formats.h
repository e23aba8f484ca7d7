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

#ifndef BIPHOTON_FORMATS_H_
#define BIPHOTON_FORMATS_H_

#include <array>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/biphoton_spectrum.h"
#include "biphoton/coincidence.h"
#include "biphoton/phase_lock.h"
#include "biphoton/polarization_optics.h"
#include "biphoton/quantum_core.h"
#include "biphoton/tomography.h"

namespace biphoton {

/// Malformed or unreadable artifact.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Density matrix: {"basis_order": [4 labels], "re": 4x4, "im": 4x4}.
// Doubles are written in shortest round-trip form.
std::string density_to_json(const Matrix4c& rho);
/// Rejects any basis_order other than the canonical one.
Matrix4c density_from_json(const std::string& text);

// Analyzer: {"stokes": {qwp_deg, hwp_deg, port}, "anti_stokes": {...}}.
std::string analyzers_to_json(const AnalyzerSetting& stokes, const AnalyzerSetting& anti_stokes);
std::pair<AnalyzerSetting, AnalyzerSetting> analyzers_from_json(const std::string& text);

// Waveform and spectrum: CSV (grid value, real, imag).
void write_waveform_csv(std::ostream& os, const TemporalWaveform& wf);
void write_spectrum_csv(std::ostream& os, const BiphotonSpectrum& spec);

// Time tags: little-endian records of (u8 channel, u64 time_ns), merged in time.
void write_timetags_binary(std::ostream& os, std::span<const TimeTagStream> streams);
void write_timetags_csv(std::ostream& os, std::span<const TimeTagStream> streams);
/// Splits by channel; throws FormatError on truncation, unknown channels or
/// decreasing times within a channel.
std::array<TimeTagStream, 2> read_timetags_binary(std::istream& is);
std::array<TimeTagStream, 2> read_timetags_csv(std::istream& is);

// Histogram: CSV (tau_ns, counts, g2) with bin centers.
void write_histogram_csv(std::ostream& os, const CoincidenceHistogram& hist);

// Phase trace: CSV (t_ms, phi_lock_rad, phi_rad).
void write_phase_trace_csv(std::ostream& os, const PhaseTrace& trace);

// Tomography counts: CSV rows (setting_id, qwp_s, hwp_s, qwp_as, hwp_as, counts).
void write_counts_csv(std::ostream& os, const ProjectionSet& set, std::span<const double> counts);
struct CountsTable {
  ProjectionSet set;
  std::vector<double> counts;
};
CountsTable read_counts_csv(std::istream& is);

}  // namespace biphoton

#endif  // BIPHOTON_FORMATS_H_
