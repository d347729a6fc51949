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

// Test-only fixtures and independent oracles. Everything here must stay
// independent of the library code paths it is used to check: the oracles
// work from first principles (binomial sums, Simpson integration of the
// raw formulas, dense partial traces), not by calling into the modules.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "weakmeas/qcore.hpp"
#include "weakmeas/rng.hpp"

namespace testsupport {

using weakmeas::CMatrix;
using weakmeas::Complex;
using weakmeas::CVector;

/// Deterministic pseudo-random complex vectors/matrices for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * rng_.next_uniform();
  }

  Complex complex_unit_box() {
    return Complex(uniform(-1, 1), uniform(-1, 1));
  }

  CVector state(int dim) {
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_unit_box();
    if (v.norm() < 1e-3) v(0) += 1.0;
    return v;
  }

  CMatrix hermitian(int dim) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int k = 0; k < dim; ++k) m(i, k) = complex_unit_box();
    }
    return 0.5 * (m + m.adjoint().eval());
  }

  weakmeas::SplitStream& stream() { return rng_; }

 private:
  weakmeas::SplitStream rng_;
};

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

/// Squared overlap |<axis2 extreme | axis1 extreme>|^2 for equatorial axes
/// at azimuth phi1, phi2, from the binomial expansion of extreme spin states
/// in the z basis: c_m = sqrt(C(2j, j-m)) 2^-j e^{-i (j-m) phi}.
inline double equatorial_extreme_overlap2(double j, double phi1, double phi2) {
  const int twoj = static_cast<int>(std::lround(2 * j));
  Complex sum = 0.0;
  for (int k = 0; k <= twoj; ++k) {
    sum += binomial(twoj, k) * std::exp(Complex(0.0, k * (phi1 - phi2)));
  }
  const double scale = std::pow(2.0, -2.0 * j);
  return std::norm(scale * sum);
}

/// Plain Simpson integration for oracle integrals (no refinement logic
/// shared with the library).
template <class F>
double oracle_simpson(F&& f, double lo, double hi, int n) {
  const double h = (hi - lo) / (n - 1);
  double odd = 0.0, even = 0.0;
  for (int i = 1; i + 1 < n; i += 2) odd += f(lo + i * h);
  for (int i = 2; i + 1 < n; i += 2) even += f(lo + i * h);
  return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

/// Kolmogorov-Smirnov statistic of samples against a cdf functor.
template <class Cdf>
double ks_statistic(std::vector<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max(worst, std::abs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return worst;
}

}  // namespace testsupport
