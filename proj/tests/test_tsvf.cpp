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

#include "support.hpp"
#include "weakmeas/tsvf.hpp"

using namespace weakmeas;
using Catch::Matchers::WithinAbs;

namespace {

TwoStateVector three_box_tsv() {
  return TwoStateVector(make_state({1, 1, 1}), make_state({1, 1, -1}));
}

}  // namespace

TEST_CASE("two-state vector overlap") {
  const TwoStateVector tsv = three_box_tsv();
  REQUIRE_THAT(tsv.overlap().real(), WithinAbs(1.0 / 3.0, 1e-15));
  REQUIRE_THAT(std::abs(tsv.overlap() - inner(tsv.post(), tsv.pre())),
               WithinAbs(0.0, 1e-12));
  REQUIRE_THROWS_AS(TwoStateVector(make_state({1, 0}), make_state({1, 0, 0})),
                    DimensionMismatch);
}

TEST_CASE("three-box weak values") {
  const TwoStateVector tsv = three_box_tsv();
  REQUIRE_THAT(std::abs(weak_value(projector({0}, 3), tsv).value -
                        Complex(1, 0)),
               WithinAbs(0.0, 1e-13));
  REQUIRE_THAT(std::abs(weak_value(projector({1}, 3), tsv).value -
                        Complex(1, 0)),
               WithinAbs(0.0, 1e-13));
  REQUIRE_THAT(std::abs(weak_value(projector({2}, 3), tsv).value -
                        Complex(-1, 0)),
               WithinAbs(0.0, 1e-13));
}

TEST_CASE("weak value of the spin bisector component") {
  const std::array<double, 3> x{1, 0, 0}, y{0, 1, 0};
  const double r = 1.0 / std::numbers::sqrt2;
  for (int n = 1; n <= 8; ++n) {
    const double j = n;
    const TwoStateVector tsv(spin_coherent_state(j, x),
                             spin_coherent_state(j, y));
    const Complex wv = weak_value(spin_operator(j, {r, r, 0}), tsv).value;
    REQUIRE_THAT(std::abs(wv - Complex(std::numbers::sqrt2 * j, 0)),
                 WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("trivial post-selection reproduces the expectation value") {
  testsupport::Gen gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(gen.uniform(0, 4.999));
    const StateVector psi = make_state(gen.state(dim));
    const Observable a = make_observable(gen.hermitian(dim));
    const TwoStateVector tsv(psi, psi);
    const Complex wv = weak_value(a, tsv).value;
    REQUIRE_THAT(wv.real(), WithinAbs(expectation(a, psi), 1e-11));
    REQUIRE_THAT(wv.imag(), WithinAbs(0.0, 1e-11));
  }
}

TEST_CASE("weak value refuses orthogonal selections") {
  const TwoStateVector tsv(make_state({1, 0}), make_state({0, 1}));
  REQUIRE_THROWS_AS(weak_value(pauli_z(), tsv), OrthogonalSelection);
}

TEST_CASE("weak value of the identity is exactly one") {
  testsupport::Gen gen(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(gen.uniform(0, 4.999));
    const TwoStateVector tsv(make_state(gen.state(dim)),
                             make_state(gen.state(dim)));
    if (std::abs(tsv.overlap()) < 1e-6) continue;
    const Complex wv = weak_value(identity_observable(dim), tsv).value;
    REQUIRE(wv == Complex(1.0, 0.0));
  }
}

TEST_CASE("weak value is global-phase invariant") {
  testsupport::Gen gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 3;
    const CVector pre = gen.state(dim);
    const CVector post = gen.state(dim);
    const Observable a = make_observable(gen.hermitian(dim));
    const TwoStateVector base(make_state(pre), make_state(post));
    if (std::abs(base.overlap()) < 1e-3) continue;
    const Complex p1 = std::polar(1.0, gen.uniform(0, 2 * std::numbers::pi));
    const Complex p2 = std::polar(1.0, gen.uniform(0, 2 * std::numbers::pi));
    const TwoStateVector rotated(make_state((p1 * pre).eval()),
                                 make_state((p2 * post).eval()));
    REQUIRE_THAT(std::abs(weak_value(a, base).value -
                          weak_value(a, rotated).value),
                 WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("three-box conditional probabilities") {
  const TwoStateVector tsv = three_box_tsv();

  // Searching box A alone: found with certainty.
  const auto table_a = abl_probability(projector({0}, 3), tsv);
  REQUIRE(table_a.size() == 2);
  REQUIRE_THAT(table_a[1].eigenvalue, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(table_a[1].probability, WithinAbs(1.0, 1e-13));

  const auto table_b = abl_probability(projector({1}, 3), tsv);
  REQUIRE_THAT(table_b[1].probability, WithinAbs(1.0, 1e-13));

  // A coherent yes/no test of the A,B subspace projector: amplitudes 2/3
  // and -1/3 through the two eigenspaces give outcome-1 probability
  // (2/3)^2 / ((2/3)^2 + (1/3)^2) = 4/5.
  const auto table_ab = abl_probability(projector({0, 1}, 3), tsv);
  REQUIRE_THAT(table_ab[1].probability, WithinAbs(0.8, 1e-13));

  // Consistent selections.
  const TwoStateVector trivial(make_state({1, 0}), make_state({1, 0}));
  const auto table_z = abl_probability(pauli_z(), trivial);
  REQUIRE_THAT(table_z[1].eigenvalue, WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(table_z[1].probability, WithinAbs(1.0, 1e-14));

  // No outcome compatible with both selections.
  const TwoStateVector blocked(make_state({1, 1}), make_state({1, -1}));
  REQUIRE_THROWS_AS(abl_probability(identity_observable(2), blocked),
                    IncompatibleSelections);
}

TEST_CASE("ABL tables sum to one with entries in range") {
  testsupport::Gen gen(24);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + static_cast<int>(gen.uniform(0, 4.999));
    const TwoStateVector tsv(make_state(gen.state(dim)),
                             make_state(gen.state(dim)));
    const Observable a = make_observable(gen.hermitian(dim));
    double sum = 0.0;
    for (const AblEntry& e : abl_probability(a, tsv)) {
      REQUIRE(e.probability >= 0.0);
      REQUIRE(e.probability <= 1.0 + 1e-12);
      sum += e.probability;
    }
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("ideal elements of reality in the three-box setup") {
  const TwoStateVector tsv = three_box_tsv();
  const auto in_a = ideal_element_of_reality(projector({0}, 3), tsv);
  REQUIRE(in_a.has_value());
  REQUIRE_THAT(*in_a, WithinAbs(1.0, 1e-12));

  const auto in_b = ideal_element_of_reality(projector({1}, 3), tsv);
  REQUIRE(in_b.has_value());
  REQUIRE_THAT(*in_b, WithinAbs(1.0, 1e-12));

  const auto total = ideal_element_of_reality(identity_observable(3), tsv);
  REQUIRE(total.has_value());
  REQUIRE_THAT(*total, WithinAbs(1.0, 1e-12));

  REQUIRE_FALSE(ideal_element_of_reality(projector({0, 1}, 3), tsv));
}

TEST_CASE("no certain single-particle spin for the singlet") {
  const StateVector singlet = make_state({0, 1, -1, 0});
  const TwoStateVector tsv(singlet, singlet);
  const Observable zi = op_tensor(pauli_z(), identity_observable(2));
  REQUIRE_FALSE(ideal_element_of_reality(zi, tsv));
}

TEST_CASE("sum rule holds for randomized inputs") {
  testsupport::Gen gen(25);
  int done = 0;
  while (done < 100) {
    const int dim = 2 + static_cast<int>(gen.uniform(0, 4.999));
    const TwoStateVector tsv(make_state(gen.state(dim)),
                             make_state(gen.state(dim)));
    if (std::abs(tsv.overlap()) <= 0.05) continue;
    const Observable a = make_observable(gen.hermitian(dim));
    const Observable b = make_observable(gen.hermitian(dim));
    const SumRuleReport report = check_sum_rule(a, b, tsv);
    REQUIRE(report.equal);
    REQUIRE_THAT(std::abs(report.lhs - report.rhs), WithinAbs(0.0, 1e-10));
    ++done;
  }
}

TEST_CASE("sum rule with a zero addend") {
  const TwoStateVector tsv = three_box_tsv();
  const Observable a = projector({0}, 3);
  const Observable zero = make_observable(CMatrix::Zero(3, 3));
  const SumRuleReport report = check_sum_rule(a, zero, tsv);
  REQUIRE(report.equal);
  REQUIRE_THAT(std::abs(report.lhs - weak_value(a, tsv).value),
               WithinAbs(0.0, 1e-13));
}

TEST_CASE("three-box sum rule derives the negative weak value") {
  const TwoStateVector tsv = three_box_tsv();
  const Complex total = weak_value(identity_observable(3), tsv).value;
  const Complex wa = weak_value(projector({0}, 3), tsv).value;
  const Complex wb = weak_value(projector({1}, 3), tsv).value;
  REQUIRE_THAT(std::abs(total - wa - wb - Complex(-1, 0)),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("product rule fails for the two certain boxes") {
  const TwoStateVector tsv = three_box_tsv();
  const ProductRuleReport report =
      check_product_rule(projector({0}, 3), projector({1}, 3), tsv);
  REQUIRE(report.commuting);
  REQUIRE_THAT(std::abs(report.lhs), WithinAbs(0.0, 1e-13));
  REQUIRE_THAT(std::abs(report.rhs - Complex(1, 0)), WithinAbs(0.0, 1e-13));
  REQUIRE_FALSE(report.equal);
}

TEST_CASE("product rule trivial cases") {
  const TwoStateVector tsv = three_box_tsv();
  const Observable a = projector({0}, 3);
  const ProductRuleReport with_identity =
      check_product_rule(a, identity_observable(3), tsv);
  REQUIRE(with_identity.equal);

  const TwoStateVector eigen(make_state({1, 0, 0}), make_state({1, 0, 0}));
  const ProductRuleReport same = check_product_rule(a, a, eigen);
  REQUIRE(same.equal);
}

TEST_CASE("product rule flags noncommuting inputs") {
  const TwoStateVector tsv(make_state({1, 0}), make_state({1, 1}));
  const ProductRuleReport report = check_product_rule(pauli_x(), pauli_z(), tsv);
  REQUIRE_FALSE(report.commuting);
}

TEST_CASE("certain strong outcomes pin the weak value") {
  const TwoStateVector tsv = three_box_tsv();

  const StrongWeakReport pass =
      strong_implies_weak_check(projector({0}, 3), tsv);
  REQUIRE(pass.status == StrongWeakReport::Status::pass);
  REQUIRE(pass.ideal_value.has_value());

  const StrongWeakReport na = strong_implies_weak_check(projector({2}, 3), tsv);
  REQUIRE(na.status == StrongWeakReport::Status::not_applicable);
  REQUIRE_THAT(std::abs(na.weak - Complex(-1, 0)), WithinAbs(0.0, 1e-12));

  const TwoStateVector eigen(make_state({0, 1, 0}), make_state({0, 1, 0}));
  const StrongWeakReport trivial =
      strong_implies_weak_check(projector({1}, 3), eigen);
  REQUIRE(trivial.status == StrongWeakReport::Status::pass);
  REQUIRE_THAT(*trivial.ideal_value, WithinAbs(1.0, 1e-12));
}

TEST_CASE("reality report invariants") {
  const TwoStateVector tsv = three_box_tsv();
  const RealityReport report =
      reality_report("Pi_A+Pi_B", projector({0, 1}, 3), tsv);
  double sum = 0.0;
  for (const AblEntry& e : report.abl_table) sum += e.probability;
  REQUIRE_THAT(sum, WithinAbs(1.0, 1e-10));
  REQUIRE_FALSE(report.ideal_value.has_value());
  REQUIRE_THAT(std::abs(report.weak - Complex(2, 0)), WithinAbs(0.0, 1e-12));
}
