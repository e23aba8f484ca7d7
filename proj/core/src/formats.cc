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

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace biphoton {

namespace {

using nlohmann::json;

/// Shortest representation that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) {
    throw FormatError("line " + std::to_string(line) + ": not a number '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, std::size_t line) {
  std::int64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw FormatError("line " + std::to_string(line) + ": not an integer '" + s + "'");
  }
  return v;
}

json setting_json(const AnalyzerSetting& s) {
  return {{"qwp_deg", s.qwp_deg},
          {"hwp_deg", s.hwp_deg},
          {"port", s.port == PbsPort::kTransmit ? "transmit" : "reflect"}};
}

AnalyzerSetting setting_from(const json& j) {
  AnalyzerSetting s;
  s.qwp_deg = j.at("qwp_deg").get<double>();
  s.hwp_deg = j.at("hwp_deg").get<double>();
  const std::string port = j.at("port").get<std::string>();
  if (port == "transmit") {
    s.port = PbsPort::kTransmit;
  } else if (port == "reflect") {
    s.port = PbsPort::kReflect;
  } else {
    throw FormatError("unknown PBS port '" + port + "'");
  }
  return s;
}

struct Record {
  std::int64_t time;
  std::uint8_t channel;
};

std::vector<Record> merged(std::span<const TimeTagStream> streams) {
  std::vector<Record> out;
  for (const auto& s : streams) {
    s.validate();
    for (std::int64_t t : s.times_ns) out.push_back({t, static_cast<std::uint8_t>(s.channel)});
  }
  std::stable_sort(out.begin(), out.end(), [](const Record& a, const Record& b) {
    return a.time != b.time ? a.time < b.time : a.channel < b.channel;
  });
  return out;
}

void push_record(std::array<TimeTagStream, 2>& out, unsigned channel, std::int64_t t,
                 std::size_t where) {
  if (channel > 1) {
    throw FormatError("record " + std::to_string(where) + ": unknown channel " +
                      std::to_string(channel));
  }
  if (t < 0) throw FormatError("record " + std::to_string(where) + ": negative time");
  auto& v = out[channel].times_ns;
  if (!v.empty() && t < v.back()) {
    throw FormatError("record " + std::to_string(where) + ": times decrease in channel " +
                      std::to_string(channel));
  }
  v.push_back(t);
}

std::array<TimeTagStream, 2> empty_pair() {
  return {TimeTagStream{Channel::kStokes, {}}, TimeTagStream{Channel::kAntiStokes, {}}};
}

}  // namespace

std::string density_to_json(const Matrix4c& rho) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < 4; ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < 4; ++c) {
      rr.push_back(rho(r, c).real());
      ii.push_back(rho(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  json j;
  j["basis_order"] = std::vector<std::string>(kCanonicalBasis.begin(), kCanonicalBasis.end());
  j["re"] = re;
  j["im"] = im;
  return j.dump(2) + "\n";
}

Matrix4c density_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const auto order = j.at("basis_order").get<std::vector<std::string>>();
    if (order.size() != 4 || !std::equal(order.begin(), order.end(), kCanonicalBasis.begin())) {
      throw FormatError("density matrix: basis_order must be HH, HV, VH, VV");
    }
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    if (re.size() != 4 || im.size() != 4) throw FormatError("density matrix: need 4 rows");
    Matrix4c m;
    for (int r = 0; r < 4; ++r) {
      if (re[r].size() != 4 || im[r].size() != 4) throw FormatError("density matrix: need 4 columns");
      for (int c = 0; c < 4; ++c) m(r, c) = Complex(re[r][c], im[r][c]);
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("density matrix: ") + e.what());
  }
}

std::string analyzers_to_json(const AnalyzerSetting& stokes, const AnalyzerSetting& anti_stokes) {
  const json j = {{"stokes", setting_json(stokes)}, {"anti_stokes", setting_json(anti_stokes)}};
  return j.dump(2) + "\n";
}

std::pair<AnalyzerSetting, AnalyzerSetting> analyzers_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    return {setting_from(j.at("stokes")), setting_from(j.at("anti_stokes"))};
  } catch (const json::exception& e) {
    throw FormatError(std::string("analyzers: ") + e.what());
  }
}

void write_waveform_csv(std::ostream& os, const TemporalWaveform& wf) {
  os << "tau_ns,re,im\n";
  for (std::size_t n = 0; n < wf.samples.size(); ++n) {
    os << fmt(wf.time_ns(n)) << ',' << fmt(wf.samples[n].real()) << ','
       << fmt(wf.samples[n].imag()) << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const BiphotonSpectrum& spec) {
  os << "delta_rad_per_s,re,im\n";
  for (std::size_t k = 0; k < spec.amplitude.size(); ++k) {
    os << fmt(spec.grid.at(k)) << ',' << fmt(spec.amplitude[k].real()) << ','
       << fmt(spec.amplitude[k].imag()) << '\n';
  }
}

void write_timetags_binary(std::ostream& os, std::span<const TimeTagStream> streams) {
  for (const Record& r : merged(streams)) {
    unsigned char buf[9];
    buf[0] = r.channel;
    auto t = static_cast<std::uint64_t>(r.time);
    for (int i = 0; i < 8; ++i) buf[1 + i] = static_cast<unsigned char>((t >> (8 * i)) & 0xFFu);
    os.write(reinterpret_cast<const char*>(buf), sizeof buf);
  }
  if (!os) throw FormatError("time tags: write failed");
}

void write_timetags_csv(std::ostream& os, std::span<const TimeTagStream> streams) {
  os << "channel,time_ns\n";
  for (const Record& r : merged(streams)) os << static_cast<unsigned>(r.channel) << ',' << r.time << '\n';
  if (!os) throw FormatError("time tags: write failed");
}

std::array<TimeTagStream, 2> read_timetags_binary(std::istream& is) {
  auto out = empty_pair();
  unsigned char buf[9];
  std::size_t n = 0;
  while (true) {
    is.read(reinterpret_cast<char*>(buf), sizeof buf);
    const auto got = is.gcount();
    if (got == 0) break;
    if (got != static_cast<std::streamsize>(sizeof buf)) {
      throw FormatError("time tags: truncated record " + std::to_string(n));
    }
    std::uint64_t t = 0;
    for (int i = 0; i < 8; ++i) t |= static_cast<std::uint64_t>(buf[1 + i]) << (8 * i);
    if (t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw FormatError("time tags: time out of range in record " + std::to_string(n));
    }
    push_record(out, buf[0], static_cast<std::int64_t>(t), n);
    ++n;
  }
  return out;
}

std::array<TimeTagStream, 2> read_timetags_csv(std::istream& is) {
  auto out = empty_pair();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line.rfind("channel", 0) == 0)) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw FormatError("line " + std::to_string(lineno) + ": need 2 columns");
    push_record(out, static_cast<unsigned>(parse_int(cells[0], lineno)), parse_int(cells[1], lineno),
                lineno);
  }
  return out;
}

void write_histogram_csv(std::ostream& os, const CoincidenceHistogram& hist) {
  os << "tau_ns,counts,g2\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    os << fmt(hist.tau_center_ns(i)) << ',' << hist.counts[i] << ',' << fmt(hist.g2[i]) << '\n';
  }
}

void write_phase_trace_csv(std::ostream& os, const PhaseTrace& trace) {
  os << "t_ms,phi_lock_rad,phi_rad\n";
  for (const PhaseSample& s : trace.samples) {
    os << fmt(s.t_ms) << ',' << fmt(s.lock_phase) << ',' << fmt(s.phase) << '\n';
  }
}

void write_counts_csv(std::ostream& os, const ProjectionSet& set, std::span<const double> counts) {
  if (counts.size() != set.settings.size()) throw FormatError("counts: size does not match the set");
  os << "setting_id,qwp_s,hwp_s,qwp_as,hwp_as,counts\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& s = set.settings[i];
    os << s.label << ',' << fmt(s.stokes.qwp_deg) << ',' << fmt(s.stokes.hwp_deg) << ','
       << fmt(s.anti_stokes.qwp_deg) << ',' << fmt(s.anti_stokes.hwp_deg) << ',' << fmt(counts[i])
       << '\n';
  }
}

CountsTable read_counts_csv(std::istream& is) {
  CountsTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (lineno == 1 && line.rfind("setting_id", 0) == 0)) continue;
    const auto c = split_csv(line);
    if (c.size() != 6) throw FormatError("line " + std::to_string(lineno) + ": need 6 columns");
    ProjectionSetting s;
    s.label = c[0];
    s.stokes.qwp_deg = parse_double(c[1], lineno);
    s.stokes.hwp_deg = parse_double(c[2], lineno);
    s.anti_stokes.qwp_deg = parse_double(c[3], lineno);
    s.anti_stokes.hwp_deg = parse_double(c[4], lineno);
    const double n = parse_double(c[5], lineno);
    if (!(n >= 0.0)) throw FormatError("line " + std::to_string(lineno) + ": negative counts");
    t.set.settings.push_back(s);
    t.counts.push_back(n);
  }
  if (t.counts.size() != 16) {
    throw FormatError("counts: expected 16 rows, got " + std::to_string(t.counts.size()));
  }
  return t;
}

}  // namespace biphoton
