// Copyright 2026 The weakmeas developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "weakmeas/measure.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/scenarios.hpp"
#include "weakmeas/tsvf.hpp"
#include "weakmeas/version.hpp"

namespace weakmeas {

/// Locale-independent, 17 significant digits (round-trips a double).
inline std::string format_double(double v) {
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_complex(const Complex& z) {
  return format_double(z.real()) +
         (z.imag() < 0 ? " - " : " + ") + format_double(std::abs(z.imag())) +
         "i";
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// '#'-prefixed header carried by every output file: toolkit version first,
/// then the run's key/value echo.
inline void write_metadata(std::ostream& os, const Metadata& meta) {
  os << "# " << kToolkitName << " " << kVersion << "\n";
  for (const auto& [key, value] : meta) {
    os << "# " << key << " = " << value << "\n";
  }
}

/// Two-column density table on a uniform grid over the support window.
inline void write_density_table(std::ostream& os,
                                const PointerDistribution& dist, int points,
                                Metadata meta = {}) {
  const auto [lo, hi] = dist.support();
  meta.emplace_back("grid", "uniform[" + std::to_string(points) + "] on [" +
                                format_double(lo) + ", " + format_double(hi) +
                                "]");
  meta.emplace_back("domain",
                    dist.kind() == Domain::position ? "position" : "momentum");
  meta.emplace_back("delta", format_double(dist.delta()));
  write_metadata(os, meta);
  os << (dist.kind() == Domain::position ? "q,density" : "p,density") << "\n";
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    os << format_double(x) << "," << format_double(dist.density(x)) << "\n";
  }
}

/// Single-column readings file.
inline void write_readings(std::ostream& os, const MeasurementRecord& record,
                           Metadata meta = {}) {
  meta.emplace_back("seed", std::to_string(record.seed));
  meta.emplace_back("kept", std::to_string(record.postselected_count));
  meta.emplace_back("attempted", std::to_string(record.attempted_count));
  write_metadata(os, meta);
  os << "reading\n";
  for (double r : record.readings) {
    os << format_double(r) << "\n";
  }
}

inline void write_reality_report(std::ostream& os, const RealityReport& r) {
  os << "observable: " << r.label << "\n";
  os << "  conditional outcome probabilities:\n";
  for (const AblEntry& e : r.abl_table) {
    os << "    value " << format_double(e.eigenvalue) << " : "
       << format_double(e.probability) << "\n";
  }
  os << "  ideal element of reality: "
     << (r.ideal_value ? format_double(*r.ideal_value) : std::string("none"))
     << "\n";
  os << "  weak value: " << format_complex(r.weak) << "\n";
}

/// Machine-readable one-row-per-observable summary.
inline void write_weak_value_table(std::ostream& os,
                                   const std::vector<RealityReport>& reports,
                                   Metadata meta = {}) {
  write_metadata(os, meta);
  os << "observable,weak_re,weak_im,ideal_element\n";
  for (const RealityReport& r : reports) {
    os << r.label << "," << format_double(r.weak.real()) << ","
       << format_double(r.weak.imag()) << ","
       << (r.ideal_value ? format_double(*r.ideal_value) : std::string("none"))
       << "\n";
  }
}

inline const char* source_name(Source s) {
  switch (s) {
    case Source::definition:
      return "definition";
    case Source::analytic:
      return "analytic";
    case Source::numeric:
      return "numeric";
  }
  return "?";
}

/// Structured-text description of a scenario: states, observables, the
/// expected-value table, and any notes.
inline void describe_scenario(std::ostream& os, const Scenario& s) {
  os << "scenario: " << s.name << "\n";
  os << "  " << s.title << "\n";
  os << "  dimension: " << s.dimension << "\n";
  auto print_state = [&](const char* tag, const StateVector& st) {
    os << "  " << tag << ":";
    for (int i = 0; i < st.dimension(); ++i) {
      os << " " << format_complex(st.amplitude(i));
    }
    os << "\n";
  };
  print_state("pre ", s.pre);
  if (s.post) {
    print_state("post", *s.post);
  } else {
    os << "  post: none (pre-selected only)\n";
  }
  os << "  observables:";
  for (const LabeledObservable& lo : s.observables) os << " " << lo.label;
  os << "\n";
  os << "  expected:\n";
  for (const ExpectedEntry& e : s.expected) {
    os << "    " << e.label << " = ";
    if (e.quantity == Quantity::ideal_element_none) {
      os << "none";
    } else if (e.expected.imag() == 0.0) {
      os << format_double(e.expected.real());
    } else {
      os << format_complex(e.expected);
    }
    os << "  [" << source_name(e.source);
    if (e.tolerance > 0.0) os << ", tol " << format_double(e.tolerance);
    os << "]\n";
  }
  for (const std::string& note : s.notes) {
    os << "  note: " << note << "\n";
  }
}

inline void write_scenario_run(std::ostream& os, const ScenarioRun& run) {
  for (const CheckRow& row : run.rows) {
    os << (row.pass ? "  ok   " : "  FAIL ") << row.label << ": expected "
       << format_complex(row.expected) << ", got "
       << format_complex(row.actual);
    if (row.tolerance > 0.0) os << " (tol " << format_double(row.tolerance) << ")";
    os << "\n";
  }
}

}  // namespace weakmeas
