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

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "weakmeas/config.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/measure.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/qcore.hpp"
#include "weakmeas/tsvf.hpp"

namespace weakmeas {

/// What a table row asserts about the scenario.
enum class Quantity {
  weak_value,                 // weak value of `observable`
  abl_probability,            // conditional probability of `outcome`
  ideal_element,              // certain outcome exists and equals `expected`
  ideal_element_none,         // no outcome is certain
  expectation_value,          // <pre|A|pre>
  postselection_probability,  // |<post|pre>|^2
  found_in_either,            // resolving search over `box_indices`
  pointer_shift,              // pre-selected pointer mean
};

/// Where the expected number comes from: a defining property, closed-form
/// arithmetic on the fixture states, or an independent numeric computation.
enum class Source { definition, analytic, numeric };

struct ExpectedEntry {
  std::string label;
  Quantity quantity;
  std::string observable;       // label into Scenario::observables
  double outcome = 0.0;         // eigenvalue, for abl_probability rows
  std::vector<int> box_indices; // basis states, for found_in_either rows
  Complex expected;
  double tolerance;
  Source source;
};

struct LabeledObservable {
  std::string label;
  Observable op;
};

/// A self-describing fixture: selection states, named observables, and the
/// table of values the live pipeline is expected to reproduce.
struct Scenario {
  std::string name;
  std::string title;
  int dimension = 0;
  StateVector pre;
  std::optional<StateVector> post;
  std::vector<LabeledObservable> observables;
  std::vector<ExpectedEntry> expected;
  std::vector<std::string> notes;

  const Observable& observable(const std::string& label) const {
    for (const LabeledObservable& lo : observables) {
      if (lo.label == label) return lo.op;
    }
    throw Error("scenario '" + name + "' has no observable '" + label + "'");
  }

  /// Two-state vector used for conditional quantities; pre-selected-only
  /// scenarios test against a final measurement of the unchanged state.
  TwoStateVector selection() const {
    return TwoStateVector(pre, post.value_or(pre));
  }
};

// ---------------------------------------------------------------------------
// Canonical fixtures
// ---------------------------------------------------------------------------

/// Single particle in three boxes, pre-selected in (|A>+|B>+|C>)/sqrt(3) and
/// post-selected in (|A>+|B>-|C>)/sqrt(3). Searching box A finds the
/// particle with certainty, so does searching box B, and the box-C projector
/// carries weak value -1.
inline Scenario three_box() {
  Scenario s;
  s.name = "three-box";
  s.title = "one particle, three boxes, selections forcing it into A and B at once";
  s.dimension = 3;
  s.pre = make_state({1, 1, 1});
  s.post = make_state({1, 1, -1});
  s.observables.push_back({"Pi_A", projector({0}, 3)});
  s.observables.push_back({"Pi_B", projector({1}, 3)});
  s.observables.push_back({"Pi_C", projector({2}, 3)});
  s.observables.push_back({"Pi_A+Pi_B", projector({0, 1}, 3)});
  s.observables.push_back({"Pi_A+Pi_B+Pi_C", identity_observable(3)});
  s.observables.push_back(
      {"Pi_A*Pi_B", make_observable(CMatrix::Zero(3, 3))});

  const double third = 1.0 / 3.0;
  s.expected = {
      {"(Pi_A)_w", Quantity::weak_value, "Pi_A", 0, {}, 1.0, 1e-12,
       Source::analytic},
      {"(Pi_B)_w", Quantity::weak_value, "Pi_B", 0, {}, 1.0, 1e-12,
       Source::analytic},
      {"(Pi_C)_w", Quantity::weak_value, "Pi_C", 0, {}, -1.0, 1e-12,
       Source::analytic},
      {"(Pi_A+Pi_B)_w", Quantity::weak_value, "Pi_A+Pi_B", 0, {}, 2.0, 1e-12,
       Source::analytic},
      {"(Pi_A+Pi_B+Pi_C)_w", Quantity::weak_value, "Pi_A+Pi_B+Pi_C", 0, {},
       1.0, 1e-12, Source::definition},
      {"(Pi_A*Pi_B)_w", Quantity::weak_value, "Pi_A*Pi_B", 0, {}, 0.0, 1e-12,
       Source::definition},
      {"P(found in A)", Quantity::abl_probability, "Pi_A", 1.0, {}, 1.0,
       1e-12, Source::analytic},
      {"P(found in B)", Quantity::abl_probability, "Pi_B", 1.0, {}, 1.0,
       1e-12, Source::analytic},
      {"ideal element Pi_A", Quantity::ideal_element, "Pi_A", 0, {}, 1.0,
       1e-12, Source::analytic},
      {"ideal element Pi_B", Quantity::ideal_element, "Pi_B", 0, {}, 1.0,
       1e-12, Source::analytic},
      {"ideal element Pi_A+Pi_B+Pi_C", Quantity::ideal_element,
       "Pi_A+Pi_B+Pi_C", 0, {}, 1.0, 1e-12, Source::definition},
      {"no ideal element Pi_A+Pi_B", Quantity::ideal_element_none,
       "Pi_A+Pi_B", 0, {}, 0.0, 0.0, Source::analytic},
      {"P(found searching A and B)", Quantity::found_in_either, "", 0, {0, 1},
       2.0 * third, 1e-12, Source::analytic},
      {"post-selection probability", Quantity::postselection_probability, "",
       0, {}, third * third, 1e-12, Source::analytic},
  };
  s.notes = {
      "The 2/3 row is the probability that a search opening boxes A and B "
      "(with the apparatus resolving which box) finds the particle. A "
      "coherent yes/no measurement of the projector onto the A,B subspace "
      "is a different experiment; its outcome-1 conditional probability is "
      "4/5.",
  };
  return s;
}

/// Spin-N particle pre-selected along +x and post-selected along +y. The
/// spin component along the bisector carries weak value sqrt(2) N, beyond
/// the largest eigenvalue N.
inline Scenario spin_bisector(int n) {
  if (n < 1 || n > 12) {
    throw InvalidSpin("spin_bisector: N must be in 1..12, got " +
                      std::to_string(n));
  }
  const double j = static_cast<double>(n);
  const std::array<double, 3> x{1, 0, 0};
  const std::array<double, 3> y{0, 1, 0};
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const std::array<double, 3> bisector{inv_sqrt2, inv_sqrt2, 0};

  Scenario s;
  s.name = "spin-bisector-" + std::to_string(n);
  s.title = "spin " + std::to_string(n) +
            " selected along +x then +y; bisector component beyond its "
            "largest eigenvalue";
  s.dimension = 2 * n + 1;
  s.pre = spin_coherent_state(j, x);
  s.post = spin_coherent_state(j, y);
  s.observables.push_back({"S_x", spin_operator(j, x)});
  s.observables.push_back({"S_y", spin_operator(j, y)});
  s.observables.push_back({"S_xi", spin_operator(j, bisector)});

  s.expected = {
      {"(S_x)_w", Quantity::weak_value, "S_x", 0, {}, j, 1e-9,
       Source::analytic},
      {"(S_y)_w", Quantity::weak_value, "S_y", 0, {}, j, 1e-9,
       Source::analytic},
      {"(S_xi)_w", Quantity::weak_value, "S_xi", 0, {},
       std::numbers::sqrt2 * j, 1e-9, Source::analytic},
      {"post-selection probability", Quantity::postselection_probability, "",
       0, {}, std::pow(4.0, -j), 1e-10, Source::numeric},
  };
  s.notes = {
      "The post-selection probability 4^-N is the squared overlap of the "
      "+x and +y extreme states of a single spin-N system. The often-quoted "
      "figure 2^-N corresponds to a different reading, N spin-1/2 particles "
      "each selected individually; the two readings disagree and only the "
      "single spin-N value is used here.",
  };
  return s;
}

/// Two spin-1/2 particles in the singlet state, pre-selected only. No
/// single-particle spin component has a certain outcome, yet the pair is
/// perfectly anticorrelated.
inline Scenario epr_singlet() {
  Scenario s;
  s.name = "epr-singlet";
  s.title = "singlet pair: anticorrelated spins with no certain single-particle component";
  s.dimension = 4;
  s.pre = make_state({0, 1, -1, 0});
  s.post = std::nullopt;
  const Observable id2 = identity_observable(2);
  s.observables.push_back({"sigma_z(x)I", op_tensor(pauli_z(), id2)});
  s.observables.push_back({"sigma_x(x)I", op_tensor(pauli_x(), id2)});
  s.observables.push_back({"sigma_z(x)sigma_z", op_tensor(pauli_z(), pauli_z())});

  s.expected = {
      {"<sigma_z(x)I>", Quantity::expectation_value, "sigma_z(x)I", 0, {},
       0.0, 1e-12, Source::analytic},
      {"<sigma_x(x)I>", Quantity::expectation_value, "sigma_x(x)I", 0, {},
       0.0, 1e-12, Source::analytic},
      {"<sigma_z(x)sigma_z>", Quantity::expectation_value, "sigma_z(x)sigma_z",
       0, {}, -1.0, 1e-12, Source::analytic},
      {"no certain sigma_z(x)I", Quantity::ideal_element_none, "sigma_z(x)I",
       0, {}, 0.0, 0.0, Source::analytic},
      {"no certain sigma_x(x)I", Quantity::ideal_element_none, "sigma_x(x)I",
       0, {}, 0.0, 0.0, Source::analytic},
  };
  return s;
}

/// Pre-selected-only fixture for an arbitrary state and observable: the
/// pointer shift is the expectation value, for every pointer width.
inline Scenario expectation_demo(const StateVector& psi, const Observable& a) {
  if (psi.dimension() != a.dimension()) {
    throw DimensionMismatch("expectation_demo: dimensions " +
                            std::to_string(psi.dimension()) + " vs " +
                            std::to_string(a.dimension()));
  }
  Scenario s;
  s.name = "expectation-demo";
  s.title = "pre-selected system: the pointer shift is the expectation value";
  s.dimension = psi.dimension();
  s.pre = psi;
  s.post = psi;  // trivial post-selection for the conditional pipeline
  s.observables.push_back({"A", a});
  const double mean = expectation(a, psi);
  s.expected = {
      {"<A>", Quantity::expectation_value, "A", 0, {}, mean, 1e-12,
       Source::definition},
      {"pointer shift", Quantity::pointer_shift, "A", 0, {}, mean, 1e-9,
       Source::numeric},
      {"A_w with trivial post-selection", Quantity::weak_value, "A", 0, {},
       mean, 1e-10, Source::analytic},
  };
  return s;
}

/// Parses "three-box", "epr-singlet", or "spin-bisector-N".
inline Scenario scenario_by_name(const std::string& name) {
  if (name == "three-box") return three_box();
  if (name == "epr-singlet") return epr_singlet();
  const std::string prefix = "spin-bisector-";
  if (name.rfind(prefix, 0) == 0) {
    try {
      return spin_bisector(std::stoi(name.substr(prefix.size())));
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw Error("unknown scenario '" + name +
              "' (known: three-box, epr-singlet, spin-bisector-N)");
}

inline std::vector<std::string> scenario_names() {
  return {"three-box", "epr-singlet", "spin-bisector-N  (N = 1..12)"};
}

// ---------------------------------------------------------------------------
// Running the expected table through the live pipeline
// ---------------------------------------------------------------------------

struct CheckRow {
  std::string label;
  Complex expected;
  Complex actual;
  double tolerance;
  bool pass;
};

struct ScenarioRun {
  std::vector<CheckRow> rows;
  bool all_pass = true;
};

namespace detail {

/// Observable with a distinct eigenvalue on each searched basis state, so an
/// ideal measurement resolves which of the searched boxes holds the
/// particle. Unsearched states share eigenvalue 0.
inline Observable search_observable(const std::vector<int>& boxes, int dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const int idx = boxes[k];
    if (idx < 0 || idx >= dim) {
      throw IndexOutOfRange("search_observable: index " + std::to_string(idx));
    }
    m(idx, idx) = static_cast<double>(k + 1);
  }
  return make_observable(m);
}

}  // namespace detail

/// Probability that a search resolving the listed basis states finds the
/// particle in one of them, for the given selection.
inline double resolved_search_probability(const std::vector<int>& boxes,
                                          const TwoStateVector& tsv) {
  const Observable obs = detail::search_observable(boxes, tsv.dimension());
  double p = 0.0;
  for (const AblEntry& e : abl_probability(obs, tsv)) {
    if (e.eigenvalue > 0.5) p += e.probability;
  }
  return p;
}

/// Recomputes every expected entry with the live modules.
inline ScenarioRun run_scenario(const Scenario& s,
                                const QuadratureConfig& quad = default_quadrature()) {
  ScenarioRun run;
  const TwoStateVector tsv = s.selection();
  for (const ExpectedEntry& e : s.expected) {
    CheckRow row{e.label, e.expected, 0.0, e.tolerance, false};
    switch (e.quantity) {
      case Quantity::weak_value:
        row.actual = weak_value(s.observable(e.observable), tsv).value;
        break;
      case Quantity::abl_probability: {
        const Observable& a = s.observable(e.observable);
        double p = 0.0;
        for (const AblEntry& entry : abl_probability(a, tsv)) {
          if (std::abs(entry.eigenvalue - e.outcome) < 1e-9) {
            p = entry.probability;
          }
        }
        row.actual = p;
        break;
      }
      case Quantity::ideal_element: {
        const auto v = ideal_element_of_reality(s.observable(e.observable), tsv);
        if (!v) {
          row.pass = false;
          row.actual = std::nan("");
          run.rows.push_back(row);
          run.all_pass = false;
          continue;
        }
        row.actual = *v;
        break;
      }
      case Quantity::ideal_element_none: {
        const auto v = ideal_element_of_reality(s.observable(e.observable), tsv);
        row.actual = v ? Complex(*v, 0.0) : Complex(0.0, 0.0);
        row.pass = !v.has_value();
        run.rows.push_back(row);
        run.all_pass = run.all_pass && row.pass;
        continue;
      }
      case Quantity::expectation_value:
        row.actual = expectation(s.observable(e.observable), s.pre);
        break;
      case Quantity::postselection_probability:
        row.actual = std::norm(tsv.overlap());
        break;
      case Quantity::found_in_either:
        row.actual = resolved_search_probability(e.box_indices, tsv);
        break;
      case Quantity::pointer_shift: {
        const Observable& a = s.observable(e.observable);
        const double spread =
            a.eigenvalues().size() > 0
                ? a.eigenvalues().cwiseAbs().maxCoeff()
                : 1.0;
        const GaussianPointer pointer(std::max(1.0, spread));
        row.actual =
            moments(preselected_distribution(a, s.pre, pointer), quad).mean;
        break;
      }
    }
    row.pass = std::abs(row.actual - row.expected) <= row.tolerance;
    run.rows.push_back(row);
    run.all_pass = run.all_pass && row.pass;
  }
  return run;
}

}  // namespace weakmeas
