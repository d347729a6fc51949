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

#include <cstdint>

namespace weakmeas {

/// All numeric tolerances used across the library, in one record.
/// Every construction/validation routine takes a `Tolerances` argument that
/// defaults to `default_tolerances()`, so a caller can tighten or loosen a
/// single knob without touching call sites elsewhere.
struct Tolerances {
  double state_norm = 1e-12;        // |1 - <psi|psi>| after normalization
  double hermiticity = 1e-10;       // max |M - M^dagger| entry
  double reconstruction = 1e-9;     // max |M - sum_i a_i |a_i><a_i|| entry
  double orthonormality = 1e-10;    // eigenvector pairwise orthonormality
  double degeneracy = 1e-10;        // relative eigenvalue merge threshold
  double unit_axis = 1e-10;         // |1 - ||axis||| for spin directions
  double coherent_residual = 1e-9;  // ||(n.S - j) psi|| for extreme states
  double overlap_guard = 1e-10;     // |<post|pre>| below which weak values refuse
  double certainty = 1e-9;          // "probability one" detection band
  double zero_postselection = 1e-300;  // conditional distribution underflow
  double improbable = 1e-12;        // physical-mode post-selection floor
  std::uint64_t attempt_cap = 100'000'000;  // physical-mode draw budget
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Composite-Simpson refinement parameters. The integrator starts at
/// `initial_points` (2^11 + 1), doubles the panel count until the relative
/// change of the integral drops below `rel_tol`, and gives up at `max_points`
/// (2^18 + 1). A terminal change above `fail_rel` raises
/// `QuadratureNotConverged`.
struct QuadratureConfig {
  int initial_points = (1 << 11) + 1;
  int max_points = (1 << 18) + 1;
  double rel_tol = 1e-10;
  double fail_rel = 1e-8;
  double tail_sigmas = 10.0;  // integration window padding, in widths
};

inline const QuadratureConfig& default_quadrature() {
  static const QuadratureConfig cfg{};
  return cfg;
}

}  // namespace weakmeas
