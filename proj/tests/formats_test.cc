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

#include "biphoton/formats.h"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace biphoton {
namespace {

TEST(DensityJson, BitExactRoundTrip) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Matrix4c m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = Complex(g(rng) / 3.0, g(rng) * 1e-17);
  const Matrix4c back = density_from_json(density_to_json(m));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      EXPECT_EQ(back(r, c).real(), m(r, c).real());
      EXPECT_EQ(back(r, c).imag(), m(r, c).imag());
    }
}

TEST(DensityJson, RejectsOtherBasisAndShape) {
  const std::string wrong =
      R"({"basis_order":["HV","HH","VV","VH"],"re":[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],)"
      R"("im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})";
  EXPECT_THROW(density_from_json(wrong), FormatError);
  EXPECT_THROW(density_from_json(R"({"basis_order":["HH","HV","VH","VV"],"re":[[1]],"im":[[0]]})"),
               FormatError);
  EXPECT_THROW(density_from_json("not json"), FormatError);
}

TEST(AnalyzerJson, RoundTrip) {
  const AnalyzerSetting s{12.5, 33.25, PbsPort::kReflect}, a{0.0, 22.5, PbsPort::kTransmit};
  const auto [s2, a2] = analyzers_from_json(analyzers_to_json(s, a));
  EXPECT_EQ(s2, s);
  EXPECT_EQ(a2, a);
  EXPECT_THROW(analyzers_from_json(R"({"stokes":{"qwp_deg":0,"hwp_deg":0,"port":"up"},"anti_stokes":{}})"),
               FormatError);
}

TEST(TimeTags, BinaryLayoutAndRoundTrip) {
  const std::vector<TimeTagStream> streams = {
      {Channel::kStokes, {1, 5, 0x0102030405060708LL}},
      {Channel::kAntiStokes, {2, 5}},
  };
  std::stringstream ss;
  write_timetags_binary(ss, streams);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 5u * 9u);
  // Records merge in time; ties go to channel 0 first.
  EXPECT_EQ(bytes[0], 0);
  EXPECT_EQ(bytes[1], 1);
  EXPECT_EQ(bytes[9], 1);
  EXPECT_EQ(bytes[10], 2);
  EXPECT_EQ(bytes[36], 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[37]), 0x08);
  EXPECT_EQ(static_cast<unsigned char>(bytes[44]), 0x01);
  const auto back = read_timetags_binary(ss);
  EXPECT_EQ(back[0].times_ns, streams[0].times_ns);
  EXPECT_EQ(back[1].times_ns, streams[1].times_ns);
}

TEST(TimeTags, CsvRoundTrip) {
  const std::vector<TimeTagStream> streams = {{Channel::kStokes, {3, 9}}, {Channel::kAntiStokes, {4}}};
  std::stringstream ss;
  write_timetags_csv(ss, streams);
  EXPECT_EQ(ss.str(), "channel,time_ns\n0,3\n1,4\n0,9\n");
  const auto back = read_timetags_csv(ss);
  EXPECT_EQ(back[0].times_ns, streams[0].times_ns);
  EXPECT_EQ(back[1].times_ns, streams[1].times_ns);
}

TEST(TimeTags, RejectsCorruptInput) {
  std::stringstream truncated(std::string(13, '\0'));
  EXPECT_THROW(read_timetags_binary(truncated), FormatError);
  std::stringstream bad_channel("channel,time_ns\n2,5\n");
  EXPECT_THROW(read_timetags_csv(bad_channel), FormatError);
  std::stringstream decreasing("channel,time_ns\n0,5\n0,4\n");
  EXPECT_THROW(read_timetags_csv(decreasing), FormatError);
  std::stringstream junk("channel,time_ns\n0,abc\n");
  EXPECT_THROW(read_timetags_csv(junk), FormatError);
}

TEST(Histogram, Csv) {
  CoincidenceHistogram h;
  h.bin_ns = 2;
  h.tau_min_ns = -2;
  h.counts = {3, 4};
  h.g2 = {1.5, 2.0};
  std::ostringstream os;
  write_histogram_csv(os, h);
  EXPECT_EQ(os.str(), "tau_ns,counts,g2\n-1,3,1.5\n1,4,2\n");
}

TEST(PhaseTraceCsv, Columns) {
  PhaseTrace t;
  t.samples = {{1.0, 0.5, 0.25}};
  std::ostringstream os;
  write_phase_trace_csv(os, t);
  EXPECT_EQ(os.str(), "t_ms,phi_lock_rad,phi_rad\n1,0.5,0.25\n");
}

TEST(Waveform, Csv) {
  TemporalWaveform wf;
  wf.start_ns = 0.5;
  wf.step_ns = 1.0;
  wf.samples = {Complex(1.0, -2.0)};
  std::ostringstream os;
  write_waveform_csv(os, wf);
  EXPECT_EQ(os.str(), "tau_ns,re,im\n0.5,1,-2\n");
}

TEST(Counts, RoundTripAndValidation) {
  const ProjectionSet set = standard_projection_set();
  std::vector<double> n(16);
  for (int i = 0; i < 16; ++i) n[i] = 100 + i;
  std::stringstream ss;
  write_counts_csv(ss, set, n);
  const CountsTable t = read_counts_csv(ss);
  EXPECT_EQ(t.counts, n);
  ASSERT_EQ(t.set.settings.size(), 16u);
  for (int i = 0; i < 16; ++i) {
    EXPECT_EQ(t.set.settings[i].label, set.settings[i].label);
    EXPECT_EQ(t.set.settings[i].stokes, set.settings[i].stokes);
    EXPECT_EQ(t.set.settings[i].anti_stokes, set.settings[i].anti_stokes);
  }
  std::stringstream short_file("setting_id,qwp_s,hwp_s,qwp_as,hwp_as,counts\nHH,0,0,0,0,5\n");
  EXPECT_THROW(read_counts_csv(short_file), FormatError);
}

}  // namespace
}  // namespace biphoton
