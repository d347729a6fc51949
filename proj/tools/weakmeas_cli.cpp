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

// Command-line front end: run registry scenarios or inline configurations,
// sweep pointer widths, and generate reading ensembles. All outputs are
// plain text with '#'-prefixed metadata headers and are byte-reproducible
// for a fixed seed and configuration.
//
// Exit codes: 0 ok, 2 configuration error, 3 orthogonal selection,
// 4 quadrature failure, 5 post-selection too improbable.

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "weakmeas/weakmeas.hpp"

namespace {

using namespace weakmeas;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOrthogonal = 3;
constexpr int kExitQuadrature = 4;
constexpr int kExitImprobable = 5;

struct Options {
  std::string scenario;
  std::string observable;  // label within the scenario
  std::string pre, post, matrix;
  std::vector<double> deltas;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string outdir = ".";
  int grid_points = 0;
  double certainty_tol = default_tolerances().certainty;
  std::string mode = "direct";
  std::uint64_t attempt_cap = default_tolerances().attempt_cap;
  bool write_densities = false;
};

// --- inline state/matrix parsing -------------------------------------------
// Vectors: comma-separated entries, each either a real number or "(re,im)".
// Matrices: rows separated by ';'. Example: --matrix "0,1;1,0".

double parse_real(std::string_view text) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && *begin == ' ') ++begin;
  while (end != begin && *(end - 1) == ' ') --end;
  double value = 0.0;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

Complex parse_complex(std::string_view token) {
  std::size_t first = token.find_first_not_of(' ');
  std::size_t last = token.find_last_not_of(' ');
  if (first == std::string_view::npos) {
    throw Error("empty complex entry");
  }
  token = token.substr(first, last - first + 1);
  if (!token.empty() && token.front() == '(') {
    if (token.back() != ')') {
      throw Error("unbalanced parentheses in '" + std::string(token) + "'");
    }
    const std::string_view inner = token.substr(1, token.size() - 2);
    const std::size_t comma = inner.find(',');
    if (comma == std::string_view::npos) {
      throw Error("expected '(re,im)' in '" + std::string(token) + "'");
    }
    return Complex(parse_real(inner.substr(0, comma)),
                   parse_real(inner.substr(comma + 1)));
  }
  return Complex(parse_real(token), 0.0);
}

std::vector<std::string_view> split_outside_parens(std::string_view text,
                                                   char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == sep && depth == 0) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  return out;
}

CVector parse_cvector(const std::string& text) {
  const auto tokens = split_outside_parens(text, ',');
  CVector v(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_complex(tokens[i]);
  }
  return v;
}

CMatrix parse_cmatrix(const std::string& text) {
  const auto rows = split_outside_parens(text, ';');
  const auto first = split_outside_parens(rows[0], ',');
  CMatrix m(static_cast<Eigen::Index>(rows.size()),
            static_cast<Eigen::Index>(first.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto cols = split_outside_parens(rows[r], ',');
    if (cols.size() != first.size()) {
      throw Error("ragged matrix row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_complex(cols[c]);
    }
  }
  return m;
}

// --- run setup ---------------------------------------------------------------

Scenario resolve_scenario(const Options& opt) {
  const bool has_inline = !opt.pre.empty() || !opt.matrix.empty();
  if (opt.scenario.empty() == !has_inline) {
    throw Error(
        "exactly one of --scenario or an inline --pre/--matrix pair must be "
        "given");
  }
  if (!opt.scenario.empty()) {
    return scenario_by_name(opt.scenario);
  }
  if (opt.pre.empty() || opt.matrix.empty()) {
    throw Error("inline mode needs both --pre and --matrix");
  }
  Scenario s;
  s.name = "inline";
  s.title = "inline configuration";
  s.pre = make_state(parse_cvector(opt.pre));
  if (!opt.post.empty()) {
    s.post = make_state(parse_cvector(opt.post));
  }
  s.observables.push_back({"inline", make_observable(parse_cmatrix(opt.matrix))});
  s.dimension = s.pre.dimension();
  if (s.observables[0].op.dimension() != s.dimension) {
    throw Error("inline observable dimension does not match the state");
  }
  return s;
}

const Observable& pick_observable(const Scenario& s, const Options& opt) {
  if (opt.observable.empty()) return s.observables.front().op;
  return s.observable(opt.observable);
}

std::string observable_name(const Scenario& s, const Options& opt) {
  return opt.observable.empty() ? s.observables.front().label : opt.observable;
}

QuadratureConfig quadrature_from(const Options& opt) {
  QuadratureConfig cfg;
  if (opt.grid_points > 0) {
    int n = opt.grid_points;
    if (n < 5) n = 5;
    if (n % 2 == 0) ++n;
    cfg.initial_points = n;
    cfg.max_points = std::max(cfg.max_points, n);
  }
  return cfg;
}

Tolerances tolerances_from(const Options& opt) {
  Tolerances tol;
  tol.certainty = opt.certainty_tol;
  tol.attempt_cap = opt.attempt_cap;
  return tol;
}

Metadata config_echo(const Options& opt, const Scenario& s) {
  Metadata meta;
  meta.emplace_back("scenario", s.name);
  if (!opt.observable.empty()) meta.emplace_back("observable", opt.observable);
  if (!opt.pre.empty()) meta.emplace_back("pre", opt.pre);
  if (!opt.post.empty()) meta.emplace_back("post", opt.post);
  if (!opt.matrix.empty()) meta.emplace_back("matrix", opt.matrix);
  if (!opt.deltas.empty()) {
    std::string d;
    for (double x : opt.deltas) {
      if (!d.empty()) d += " ";
      d += format_double(x);
    }
    meta.emplace_back("delta", d);
  }
  if (opt.samples > 0) meta.emplace_back("samples", std::to_string(opt.samples));
  meta.emplace_back("seed", std::to_string(opt.seed));
  if (opt.grid_points > 0) {
    meta.emplace_back("grid_points", std::to_string(opt.grid_points));
  }
  meta.emplace_back("certainty_tol", format_double(opt.certainty_tol));
  return meta;
}

std::ofstream open_output(const Options& opt, const std::string& filename) {
  std::filesystem::create_directories(opt.outdir);
  const auto path = std::filesystem::path(opt.outdir) / filename;
  std::ofstream os(path);
  if (!os) {
    throw Error("cannot open output file " + path.string());
  }
  return os;
}

// --- subcommands --------------------------------------------------------------

int cmd_report(const Options& opt) {
  const Scenario scenario = resolve_scenario(opt);
  const Tolerances tol = tolerances_from(opt);
  const TwoStateVector tsv = scenario.selection();

  std::vector<RealityReport> reports;
  reports.reserve(scenario.observables.size());
  for (const LabeledObservable& lo : scenario.observables) {
    reports.push_back(
        reality_report(lo.label, lo.op, tsv, tol.certainty, tol));
  }

  const Metadata meta = config_echo(opt, scenario);
  {
    auto os = open_output(opt, "reality_report.txt");
    write_metadata(os, meta);
    describe_scenario(os, scenario);
    os << "\n";
    for (const RealityReport& r : reports) {
      write_reality_report(os, r);
    }
  }
  {
    auto os = open_output(opt, "weak_values.csv");
    write_weak_value_table(os, reports, meta);
  }

  for (const RealityReport& r : reports) {
    write_reality_report(std::cout, r);
  }
  return kExitOk;
}

int cmd_sweep(const Options& opt) {
  if (opt.deltas.size() < 2) {
    throw Error("sweep needs at least two --delta values");
  }
  const Scenario scenario = resolve_scenario(opt);
  const Observable& obs = pick_observable(scenario, opt);
  const TwoStateVector tsv = scenario.selection();
  const QuadratureConfig quad = quadrature_from(opt);

  const Complex wv = weak_value(obs, tsv).value;
  std::vector<double> deltas = opt.deltas;
  std::sort(deltas.begin(), deltas.end());

  Metadata meta = config_echo(opt, scenario);
  meta.emplace_back("observable_used", observable_name(scenario, opt));
  meta.emplace_back("weak_value_re", format_double(wv.real()));
  meta.emplace_back("weak_value_im", format_double(wv.imag()));
  meta.emplace_back("quadrature",
                    "simpson[" + std::to_string(quad.initial_points) + ".." +
                        std::to_string(quad.max_points) + "]");

  auto os = open_output(opt, "sweep.csv");
  write_metadata(os, meta);
  os << "delta,mean,variance,tv_distance_to_shift\n";
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const GaussianPointer pointer(deltas[i]);
    const PointerDistribution dist =
        postselected_distribution(obs, tsv, pointer, Domain::position);
    const Moments m = moments(dist, quad);
    const double tv = shifted_gaussian_distance(dist, wv.real(), quad);
    os << format_double(deltas[i]) << "," << format_double(m.mean) << ","
       << format_double(m.variance) << "," << format_double(tv) << "\n";
    std::cout << "delta " << format_double(deltas[i]) << ": mean "
              << format_double(m.mean) << ", tv " << format_double(tv)
              << "\n";
    if (opt.write_densities) {
      auto dos = open_output(opt, "density_" + std::to_string(i) + ".csv");
      Metadata dmeta = meta;
      dmeta.emplace_back("delta_used", format_double(deltas[i]));
      write_density_table(dos, dist,
                          opt.grid_points > 0 ? opt.grid_points : 513, dmeta);
    }
  }
  return kExitOk;
}

int cmd_sample(const Options& opt) {
  if (opt.samples < 1) {
    throw Error("--samples must be at least 1");
  }
  const Scenario scenario = resolve_scenario(opt);
  const Observable& obs = pick_observable(scenario, opt);
  const TwoStateVector tsv = scenario.selection();
  const Tolerances tol = tolerances_from(opt);
  const double delta = opt.deltas.empty() ? 1.0 : opt.deltas.front();
  const GaussianPointer pointer(delta);
  const SamplingMode mode = opt.mode == "physical" ? SamplingMode::physical
                                                   : SamplingMode::direct;

  const MeasurementRecord record = sample_postselected(
      obs, tsv, pointer, opt.samples, opt.seed, mode, tol);

  double mean = 0.0;
  for (double r : record.readings) mean += r;
  mean /= static_cast<double>(record.readings.size());
  double var = 0.0;
  for (double r : record.readings) var += (r - mean) * (r - mean);
  var /= static_cast<double>(record.readings.size());
  const double stderr_mean =
      std::sqrt(var / static_cast<double>(record.readings.size()));
  const double acceptance =
      static_cast<double>(record.postselected_count) /
      static_cast<double>(std::max<std::uint64_t>(record.attempted_count, 1));

  Metadata meta = config_echo(opt, scenario);
  meta.emplace_back("observable_used", observable_name(scenario, opt));
  meta.emplace_back("mode", opt.mode);
  meta.emplace_back("delta_used", format_double(delta));
  {
    auto os = open_output(opt, "readings.csv");
    write_readings(os, record, meta);
  }
  {
    auto os = open_output(opt, "summary.txt");
    write_metadata(os, meta);
    os << "empirical_mean = " << format_double(mean) << "\n";
    os << "standard_error = " << format_double(stderr_mean) << "\n";
    os << "acceptance_rate = " << format_double(acceptance) << "\n";
    os << "kept = " << record.postselected_count << "\n";
    os << "attempted = " << record.attempted_count << "\n";
    os << "seed = " << record.seed << "\n";
  }
  std::cout << "kept " << record.postselected_count << " of "
            << record.attempted_count << " attempts; empirical mean "
            << format_double(mean) << " +/- " << format_double(stderr_mean)
            << "\n";
  return kExitOk;
}

int cmd_scenario_list() {
  for (const std::string& name : scenario_names()) {
    std::cout << name << "\n";
  }
  std::cout << "\n";
  describe_scenario(std::cout, three_box());
  describe_scenario(std::cout, spin_bisector(2));
  describe_scenario(std::cout, epr_singlet());
  return kExitOk;
}

void add_common_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--scenario", opt.scenario,
                  "registry scenario name (see 'scenario list')");
  cmd->add_option("--observable", opt.observable,
                  "observable label within the scenario");
  cmd->add_option("--pre", opt.pre, "inline pre-selected state, e.g. '1,1,1'");
  cmd->add_option("--post", opt.post, "inline post-selected state");
  cmd->add_option("--matrix", opt.matrix,
                  "inline Hermitian observable, rows ';'-separated");
  cmd->add_option("--delta", opt.deltas, "pointer width(s)");
  cmd->add_option("--samples", opt.samples, "ensemble size");
  cmd->add_option("--seed", opt.seed, "random stream seed");
  cmd->add_option("--out", opt.outdir, "output directory")
      ->envname("WEAKMEAS_OUTDIR");
  cmd->add_option("--grid-points", opt.grid_points,
                  "initial quadrature/density grid points");
  cmd->add_option("--certainty-tol", opt.certainty_tol,
                  "probability-one detection band");
  cmd->set_config("--config", "", "flat key=value configuration file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak-measurement pointer statistics toolkit"};
  app.require_subcommand(1);

  Options report_opt, sweep_opt, sample_opt;

  CLI::App* report = app.add_subcommand(
      "report", "conditional probabilities, ideal elements, weak values");
  add_common_options(report, report_opt);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "pointer moments and shifted-Gaussian distance across widths");
  add_common_options(sweep, sweep_opt);
  sweep->add_flag("--write-densities", sweep_opt.write_densities,
                  "also write a density table per width");

  CLI::App* sample = app.add_subcommand(
      "sample", "post-selected reading ensemble for one pointer width");
  add_common_options(sample, sample_opt);
  sample->add_option("--mode", sample_opt.mode, "physical or direct")
      ->check(CLI::IsMember({"physical", "direct"}));
  sample->add_option("--attempt-cap", sample_opt.attempt_cap,
                     "physical-mode attempt budget");

  CLI::App* scenario = app.add_subcommand("scenario", "registry inspection");
  scenario->require_subcommand(1);
  scenario->add_subcommand("list", "list known scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (report->parsed()) return cmd_report(report_opt);
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (sample->parsed()) return cmd_sample(sample_opt);
    if (scenario->parsed()) return cmd_scenario_list();
  } catch (const OrthogonalSelection& e) {
    std::cerr << "orthogonal selection: " << e.what() << "\n";
    std::cerr << "overlap magnitude = " << format_double(e.overlap_magnitude)
              << ", guard = "
              << format_double(default_tolerances().overlap_guard) << "\n";
    return kExitOrthogonal;
  } catch (const QuadratureNotConverged& e) {
    std::cerr << "quadrature failure: " << e.what() << "\n";
    return kExitQuadrature;
  } catch (const TooImprobable& e) {
    std::cerr << "post-selection too improbable: " << e.what() << "\n";
    std::cerr << "estimated probability = "
              << format_double(e.estimated_probability) << "\n";
    return kExitImprobable;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
