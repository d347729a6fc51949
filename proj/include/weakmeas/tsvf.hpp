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

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "weakmeas/config.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/qcore.hpp"

namespace weakmeas {

/// Pre-/post-selected pair: the system was prepared in `pre` and a later
/// ideal measurement found it in `post`. Conditional quantities at the
/// intermediate time are functions of both.
class TwoStateVector {
 public:
  TwoStateVector(StateVector pre, StateVector post)
      : pre_(std::move(pre)), post_(std::move(post)) {
    if (pre_.dimension() != post_.dimension()) {
      throw DimensionMismatch("TwoStateVector: dimensions " +
                              std::to_string(pre_.dimension()) + " vs " +
                              std::to_string(post_.dimension()));
    }
    overlap_ = inner(post_, pre_);
  }

  const StateVector& pre() const { return pre_; }
  const StateVector& post() const { return post_; }
  /// <post|pre>.
  Complex overlap() const { return overlap_; }
  int dimension() const { return pre_.dimension(); }

 private:
  StateVector pre_;
  StateVector post_;
  Complex overlap_;
};

struct WeakValueResult {
  Complex value;
  double overlap_magnitude;
};

namespace detail {

/// num / den via the conjugate form. Overlap magnitudes sit in
/// [overlap_guard, 1], so there is no overflow risk, and equal operands
/// divide to exactly 1 (the identity observable then gets weak value 1
/// with no rounding residue, which std::complex division does not give).
inline Complex complex_ratio(const Complex& num, const Complex& den) {
  const double n2 = den.real() * den.real() + den.imag() * den.imag();
  return Complex(
      (num.real() * den.real() + num.imag() * den.imag()) / n2,
      (num.imag() * den.real() - num.real() * den.imag()) / n2);
}

}  // namespace detail

/// A_w = <post|A|pre> / <post|pre>. Exact complex ratio; reduces to the
/// expectation value when post = pre. Refuses near-orthogonal selections.
inline WeakValueResult weak_value(const Observable& a,
                                  const TwoStateVector& tsv,
                                  const Tolerances& tol = default_tolerances()) {
  if (a.dimension() != tsv.dimension()) {
    throw DimensionMismatch("weak_value: dimensions " +
                            std::to_string(a.dimension()) + " vs " +
                            std::to_string(tsv.dimension()));
  }
  const double mag = std::abs(tsv.overlap());
  if (mag <= tol.overlap_guard) {
    throw OrthogonalSelection(
        "weak_value: |<post|pre>| = " + std::to_string(mag) +
            " at or below guard " + std::to_string(tol.overlap_guard),
        mag);
  }
  const Complex numerator =
      tsv.post().amplitudes().dot(a.matrix() * tsv.pre().amplitudes());
  return WeakValueResult{detail::complex_ratio(numerator, tsv.overlap()), mag};
}

/// Transition amplitude through each eigengroup: <post|Pi_g|pre>,
/// indexed like a.groups(). These sum to the overlap.
inline std::vector<Complex> transition_amplitudes(const Observable& a,
                                                  const TwoStateVector& tsv) {
  if (a.dimension() != tsv.dimension()) {
    throw DimensionMismatch("transition_amplitudes: dimensions " +
                            std::to_string(a.dimension()) + " vs " +
                            std::to_string(tsv.dimension()));
  }
  std::vector<Complex> amps;
  amps.reserve(a.groups().size());
  for (std::size_t g = 0; g < a.groups().size(); ++g) {
    Complex amp = 0.0;
    for (int i : a.groups()[g].indices) {
      amp += tsv.post().amplitudes().dot(a.eigenvectors().col(i)) *
             a.eigenvectors().col(i).dot(tsv.pre().amplitudes());
    }
    amps.push_back(amp);
  }
  return amps;
}

struct AblEntry {
  double eigenvalue;
  double probability;
};

/// Conditional probability of each outcome of an ideal intermediate
/// measurement of `a`, given both selections:
///   P(a_g) = |<post|Pi_g|pre>|^2 / sum_h |<post|Pi_h|pre>|^2,
/// computed per eigengroup (an ideal measurement of a degenerate observable
/// resolves eigenspaces, not any finer basis). Entries are ascending in
/// eigenvalue and sum to 1.
inline std::vector<AblEntry> abl_probability(const Observable& a,
                                             const TwoStateVector& tsv) {
  const std::vector<Complex> amps = transition_amplitudes(a, tsv);
  double denom = 0.0;
  for (const Complex& amp : amps) denom += std::norm(amp);
  if (!(denom > 1e-300)) {
    throw IncompatibleSelections(
        "abl_probability: no intermediate outcome is compatible with both "
        "selections");
  }
  std::vector<AblEntry> table;
  table.reserve(amps.size());
  for (std::size_t g = 0; g < amps.size(); ++g) {
    table.push_back(AblEntry{a.groups()[g].value, std::norm(amps[g]) / denom});
  }
  return table;
}

/// The eigenvalue that an ideal measurement of `a` would yield with
/// probability one (within certainty_tol), if any.
inline std::optional<double> ideal_element_of_reality(
    const Observable& a, const TwoStateVector& tsv,
    double certainty_tol = default_tolerances().certainty) {
  for (const AblEntry& e : abl_probability(a, tsv)) {
    if (e.probability >= 1.0 - certainty_tol) return e.eigenvalue;
  }
  return std::nullopt;
}

struct SumRuleReport {
  Complex lhs;  // (A+B)_w
  Complex rhs;  // A_w + B_w
  bool equal;
};

/// (A+B)_w versus A_w + B_w. Linearity of the weak value makes these equal
/// for every nonorthogonal selection.
inline SumRuleReport check_sum_rule(const Observable& a, const Observable& b,
                                    const TwoStateVector& tsv,
                                    const Tolerances& tol = default_tolerances()) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("check_sum_rule: observable dimensions differ");
  }
  const Complex aw = weak_value(a, tsv, tol).value;
  const Complex bw = weak_value(b, tsv, tol).value;
  const Complex lhs =
      weak_value(make_observable(a.matrix() + b.matrix(), tol), tsv, tol).value;
  const Complex rhs = aw + bw;
  return SumRuleReport{lhs, rhs, std::abs(lhs - rhs) <= 1e-10};
}

struct ProductRuleReport {
  Complex lhs;  // (AB)_w, symmetrized when A and B do not commute
  Complex rhs;  // A_w * B_w
  bool equal;
  bool commuting;
};

/// (AB)_w versus A_w B_w. The product is symmetrized as (AB+BA)/2 when the
/// operators do not commute (AB alone would not be Hermitian); the report
/// flags that case. Equality generally fails under post-selection.
inline ProductRuleReport check_product_rule(
    const Observable& a, const Observable& b, const TwoStateVector& tsv,
    const Tolerances& tol = default_tolerances()) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("check_product_rule: observable dimensions differ");
  }
  const CMatrix ab = a.matrix() * b.matrix();
  const CMatrix ba = b.matrix() * a.matrix();
  const double scale = std::max({1.0, ab.cwiseAbs().maxCoeff(),
                                 ba.cwiseAbs().maxCoeff()});
  const bool commuting = (ab - ba).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  const CMatrix sym = 0.5 * (ab + ba);

  const double mag = std::abs(tsv.overlap());
  if (mag <= tol.overlap_guard) {
    throw OrthogonalSelection(
        "check_product_rule: |<post|pre>| = " + std::to_string(mag) +
            " at or below guard",
        mag);
  }
  const Complex lhs = detail::complex_ratio(
      tsv.post().amplitudes().dot(sym * tsv.pre().amplitudes()),
      tsv.overlap());
  const Complex rhs =
      weak_value(a, tsv, tol).value * weak_value(b, tsv, tol).value;
  return ProductRuleReport{lhs, rhs, std::abs(lhs - rhs) <= 1e-10, commuting};
}

struct StrongWeakReport {
  std::optional<double> ideal_value;
  Complex weak;
  enum class Status { pass, fail, not_applicable } status;
};

/// When an ideal measurement outcome is certain, the weak value must sit at
/// the same number. Reports pass/fail for certain cases and not_applicable
/// otherwise.
inline StrongWeakReport strong_implies_weak_check(
    const Observable& a, const TwoStateVector& tsv,
    double certainty_tol = default_tolerances().certainty,
    const Tolerances& tol = default_tolerances()) {
  const std::optional<double> ideal =
      ideal_element_of_reality(a, tsv, certainty_tol);
  const Complex weak = weak_value(a, tsv, tol).value;
  if (!ideal) {
    return StrongWeakReport{ideal, weak, StrongWeakReport::Status::not_applicable};
  }
  const bool ok = std::abs(weak - Complex(*ideal, 0.0)) < 1e-8;
  return StrongWeakReport{
      ideal, weak,
      ok ? StrongWeakReport::Status::pass : StrongWeakReport::Status::fail};
}

/// Everything the toolkit can say about one observable for one selection:
/// the conditional outcome table, the certain outcome if one exists, and the
/// weak value.
struct RealityReport {
  std::string label;
  std::optional<double> ideal_value;
  std::vector<AblEntry> abl_table;
  Complex weak;
  double overlap_magnitude = 0.0;
};

inline RealityReport reality_report(const std::string& label,
                                    const Observable& a,
                                    const TwoStateVector& tsv,
                                    double certainty_tol =
                                        default_tolerances().certainty,
                                    const Tolerances& tol = default_tolerances()) {
  RealityReport report;
  report.label = label;
  report.abl_table = abl_probability(a, tsv);
  for (const AblEntry& e : report.abl_table) {
    if (e.probability >= 1.0 - certainty_tol) {
      report.ideal_value = e.eigenvalue;
      break;
    }
  }
  const WeakValueResult wv = weak_value(a, tsv, tol);
  report.weak = wv.value;
  report.overlap_magnitude = wv.overlap_magnitude;
  return report;
}

}  // namespace weakmeas
