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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "support.hpp"
#include "weakmeas/io.hpp"
#include "weakmeas/measure.hpp"
#include "weakmeas/scenarios.hpp"

using namespace weakmeas;
using Catch::Matchers::WithinAbs;

TEST_CASE("every registry scenario reproduces its expected table") {
  for (const Scenario& s :
       {three_box(), spin_bisector(1), spin_bisector(3), spin_bisector(7),
        epr_singlet()}) {
    const ScenarioRun run = run_scenario(s);
    for (const CheckRow& row : run.rows) {
      INFO(s.name << ": " << row.label << " expected "
                  << format_complex(row.expected) << " got "
                  << format_complex(row.actual));
      CHECK(row.pass);
    }
    REQUIRE(run.all_pass);
  }
}

TEST_CASE("three-box fixture details") {
  const Scenario s = three_box();
  REQUIRE(s.dimension == 3);
  REQUIRE(s.observables.size() == 6);
  const TwoStateVector tsv = s.selection();
  REQUIRE_THAT(std::abs(weak_value(s.observable("Pi_A+Pi_B"), tsv).value -
                        Complex(2, 0)),
               WithinAbs(0.0, 1e-12));
  // The searched-boxes probability and the coherent subspace test disagree;
  // both are fixed numbers of the fixture.
  REQUIRE_THAT(resolved_search_probability({0, 1}, tsv),
               WithinAbs(2.0 / 3.0, 1e-13));
  const auto table = abl_probability(s.observable("Pi_A+Pi_B"), tsv);
  REQUIRE_THAT(table[1].probability, WithinAbs(0.8, 1e-13));
}

TEST_CASE("spin bisector weak value scales as sqrt(2) N") {
  for (int n = 1; n <= 12; ++n) {
    const Scenario s = spin_bisector(n);
    const Complex wv =
        weak_value(s.observable("S_xi"), s.selection()).value;
    REQUIRE_THAT(wv.real() / n, WithinAbs(std::numbers::sqrt2, 1e-9));
    REQUIRE_THAT(wv.imag(), WithinAbs(0.0, 1e-9));
    // Beyond the largest eigenvalue.
    REQUIRE(wv.real() > static_cast<double>(n));
  }
  REQUIRE_THROWS_AS(spin_bisector(0), InvalidSpin);
  REQUIRE_THROWS_AS(spin_bisector(13), InvalidSpin);
}

TEST_CASE("spin bisector report records both probability readings") {
  const Scenario s = spin_bisector(4);
  std::ostringstream os;
  describe_scenario(os, s);
  const std::string text = os.str();
  REQUIRE(text.find("4^-N") != std::string::npos);
  REQUIRE(text.find("2^-N") != std::string::npos);
}

TEST_CASE("single-shot visibility of the bisector weak value") {
  // With pointer width sqrt(N) the conditional mean still sits near
  // sqrt(2) N while a single reading scatters by about sqrt(N): the
  // beyond-spectrum value is visible at precision of order sqrt(N).
  for (int n : {4, 9}) {
    const Scenario s = spin_bisector(n);
    const Observable& s_xi = s.observable("S_xi");
    const TwoStateVector tsv = s.selection();
    const GaussianPointer pointer(std::sqrt(static_cast<double>(n)));
    const Moments m =
        moments(postselected_distribution(s_xi, tsv, pointer,
                                          Domain::position));
    const double target = std::numbers::sqrt2 * n;
    REQUIRE(std::abs(m.mean - target) < 0.05 * target);
    REQUIRE(std::sqrt(m.variance) < 1.2 * pointer.delta);
  }
}

TEST_CASE("epr singlet fixture") {
  const Scenario s = epr_singlet();
  REQUIRE_FALSE(s.post.has_value());
  REQUIRE_THAT(expectation(s.observable("sigma_z(x)sigma_z"), s.pre),
               WithinAbs(-1.0, 1e-13));
  REQUIRE_FALSE(
      ideal_element_of_reality(s.observable("sigma_z(x)I"), s.selection()));
}

TEST_CASE("expectation demo ties the pointer shift to the expectation") {
  testsupport::Gen gen(51);
  const StateVector psi = make_state(gen.state(4));
  const Observable a = make_observable(gen.hermitian(4));
  const Scenario s = expectation_demo(psi, a);
  const ScenarioRun run = run_scenario(s);
  REQUIRE(run.all_pass);

  const Scenario qubit0 = expectation_demo(make_state({1, 1}), pauli_z());
  REQUIRE_THAT(qubit0.expected[0].expected.real(), WithinAbs(0.0, 1e-12));
  const Scenario qubit1 = expectation_demo(make_state({1, 0}), pauli_z());
  REQUIRE_THAT(qubit1.expected[0].expected.real(), WithinAbs(1.0, 1e-12));
  REQUIRE(run_scenario(qubit0).all_pass);
  REQUIRE(run_scenario(qubit1).all_pass);

  REQUIRE_THROWS_AS(expectation_demo(make_state({1, 0}), projector({0}, 3)),
                    DimensionMismatch);
}

TEST_CASE("scenario lookup by name") {
  REQUIRE(scenario_by_name("three-box").name == "three-box");
  REQUIRE(scenario_by_name("epr-singlet").dimension == 4);
  REQUIRE(scenario_by_name("spin-bisector-5").dimension == 11);
  REQUIRE_THROWS_AS(scenario_by_name("spin-bisector-99"), Error);
  REQUIRE_THROWS_AS(scenario_by_name("nonsense"), Error);
  REQUIRE_THROWS_AS(scenario_by_name("spin-bisector-x"), Error);
}

TEST_CASE("scenario observable lookup") {
  const Scenario s = three_box();
  REQUIRE_THROWS_AS(s.observable("Pi_D"), Error);
}
