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
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "weakmeas/config.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/qcore.hpp"
#include "weakmeas/tsvf.hpp"

namespace weakmeas {

/// Gaussian measuring-device preparation of width delta: the pointer wave
/// function is (delta^2 pi)^(-1/4) exp(-Q^2 / 2 delta^2), so the position
/// reading has variance delta^2 / 2 and the conjugate momentum has variance
/// 1 / (2 delta^2).
struct GaussianPointer {
  double delta;

  explicit GaussianPointer(double width) : delta(width) {
    if (!(delta > 0.0)) {
      throw Error("GaussianPointer: width must be positive, got " +
                  std::to_string(width));
    }
  }
};

/// Pointer-position probability density before the interaction:
/// (delta^2 pi)^(-1/2) exp(-q^2 / delta^2). Peaks at q = 0.
inline double initial_density(const GaussianPointer& pointer, double q) {
  const double d2 = pointer.delta * pointer.delta;
  return std::exp(-q * q / d2) / std::sqrt(d2 * std::numbers::pi);
}

enum class Domain { position, momentum };

/// Analytic pointer reading density after the impulsive interaction.
///
/// Two closed forms share this type:
///  - mixture (pre-selected): sum_g w_g N(a_g, delta^2/2), with w_g the Born
///    weight of eigengroup g;
///  - coherent (post-selected): |sum_g beta_g exp(-(q-a_g)^2/2 delta^2)|^2
///    in position, or exp(-delta^2 p^2) |sum_g beta_g exp(-i a_g p)|^2 in
///    momentum, with beta_g = <post|Pi_g|pre>.
/// Both are normalized to integrate to 1. Evaluation never discretizes
/// state space; only moments and distances use quadrature.
class PointerDistribution {
 public:
  enum class Form { mixture, coherent };

  PointerDistribution(Domain kind, Form form, std::vector<Complex> coefficients,
                      std::vector<double> centers, double delta,
                      double normalization)
      : kind_(kind),
        form_(form),
        coefficients_(std::move(coefficients)),
        centers_(std::move(centers)),
        delta_(delta),
        normalization_(normalization) {}

  Domain kind() const { return kind_; }
  Form form() const { return form_; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  const std::vector<double>& centers() const { return centers_; }
  double delta() const { return delta_; }
  double normalization() const { return normalization_; }

  double density(double x) const {
    const double d2 = delta_ * delta_;
    if (form_ == Form::mixture) {
      double sum = 0.0;
      for (std::size_t g = 0; g < centers_.size(); ++g) {
        const double dq = x - centers_[g];
        sum += coefficients_[g].real() * std::exp(-dq * dq / d2);
      }
      return normalization_ * std::max(sum, 0.0);
    }
    if (kind_ == Domain::position) {
      Complex amp = 0.0;
      for (std::size_t g = 0; g < centers_.size(); ++g) {
        const double dq = x - centers_[g];
        amp += coefficients_[g] * std::exp(-dq * dq / (2.0 * d2));
      }
      return normalization_ * std::norm(amp);
    }
    Complex amp = 0.0;
    for (std::size_t g = 0; g < centers_.size(); ++g) {
      amp += coefficients_[g] *
             std::exp(Complex(0.0, -centers_[g] * x));
    }
    return normalization_ * std::exp(-d2 * x * x) * std::norm(amp);
  }

  /// Window outside which the density is negligible (tail_sigmas widths of
  /// padding beyond the outermost centers).
  std::pair<double, double> support(double tail_sigmas = 10.0) const {
    if (kind_ == Domain::momentum) {
      const double w = tail_sigmas / delta_;
      return {-w, w};
    }
    const auto [lo_it, hi_it] =
        std::minmax_element(centers_.begin(), centers_.end());
    const double spread = *hi_it - *lo_it;
    const double pad = tail_sigmas * std::max(delta_, spread);
    return {*lo_it - pad, *hi_it + pad};
  }

 private:
  Domain kind_;
  Form form_;
  std::vector<Complex> coefficients_;
  std::vector<double> centers_;
  double delta_;
  double normalization_;
};

/// The undisturbed pointer reading as a (single-center) distribution.
inline PointerDistribution initial_distribution(const GaussianPointer& pointer) {
  const double norm =
      1.0 / (pointer.delta * std::sqrt(std::numbers::pi));
  return PointerDistribution(Domain::position, PointerDistribution::Form::mixture,
                             {Complex(1.0, 0.0)}, {0.0}, pointer.delta, norm);
}

/// Reading density for a pre-selected system: a Born-weighted mixture of the
/// initial Gaussian shifted to each eigenvalue. Degenerate eigenvalues
/// contribute one component carrying the whole eigengroup weight.
inline PointerDistribution preselected_distribution(
    const Observable& a, const StateVector& psi, const GaussianPointer& pointer) {
  const std::vector<double> weights = born_weights(a, psi);
  std::vector<Complex> coeffs(weights.size());
  std::vector<double> centers(weights.size());
  for (std::size_t g = 0; g < weights.size(); ++g) {
    coeffs[g] = Complex(weights[g], 0.0);
    centers[g] = a.groups()[g].value;
  }
  const double norm =
      1.0 / (pointer.delta * std::sqrt(std::numbers::pi));
  return PointerDistribution(Domain::position, PointerDistribution::Form::mixture,
                             std::move(coeffs), std::move(centers),
                             pointer.delta, norm);
}

/// Joint success probability of the post-selection after the interaction:
/// sum_{g,h} beta_g conj(beta_h) exp(-(a_g - a_h)^2 / 4 delta^2). Used both
/// as the normalization of the conditional density and as the acceptance
/// rate of physical-mode sampling.
inline double postselection_weight(const std::vector<Complex>& betas,
                                   const std::vector<double>& centers,
                                   double delta) {
  const double d2 = delta * delta;
  double s = 0.0;
  for (std::size_t g = 0; g < betas.size(); ++g) {
    s += std::norm(betas[g]);
    for (std::size_t h = g + 1; h < betas.size(); ++h) {
      const double gap = centers[g] - centers[h];
      s += 2.0 * (betas[g] * std::conj(betas[h])).real() *
           std::exp(-gap * gap / (4.0 * d2));
    }
  }
  return std::max(s, 0.0);
}

/// Conditional reading density given a successful post-selection, in either
/// the position or the conjugate-momentum representation.
inline PointerDistribution postselected_distribution(
    const Observable& a, const TwoStateVector& tsv,
    const GaussianPointer& pointer, Domain kind,
    const Tolerances& tol = default_tolerances()) {
  const std::vector<Complex> betas = transition_amplitudes(a, tsv);
  std::vector<double> centers(betas.size());
  for (std::size_t g = 0; g < betas.size(); ++g) {
    centers[g] = a.groups()[g].value;
  }
  const double weight = postselection_weight(betas, centers, pointer.delta);
  if (!(weight > tol.zero_postselection)) {
    throw ZeroPostSelection(
        "postselected_distribution: post-selection probability underflows (" +
        std::to_string(weight) + ")");
  }
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double norm = kind == Domain::position
                          ? 1.0 / (pointer.delta * sqrt_pi * weight)
                          : pointer.delta / (sqrt_pi * weight);
  return PointerDistribution(kind, PointerDistribution::Form::coherent, betas,
                             std::move(centers), pointer.delta, norm);
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace quadrature {

/// Composite Simpson with n points (n odd, n >= 3).
template <class F>
double simpson(F&& f, double lo, double hi, int n) {
  const double h = (hi - lo) / (n - 1);
  double odd = 0.0, even = 0.0;
  for (int i = 1; i + 1 < n; i += 2) odd += f(lo + i * h);
  for (int i = 2; i + 1 < n; i += 2) even += f(lo + i * h);
  return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

struct Result {
  double value = 0.0;
  bool converged = false;
  double last_change = 0.0;  // |I_k - I_{k-1}| of the final refinement
  int points = 0;
};

/// Doubling refinement. Convergence: |I_k - I_{k-1}| <= rel_tol * max(|I_k|, 1).
/// The floor of 1 keeps legitimately-zero integrals (symmetric first moments)
/// from stalling the loop.
template <class F>
Result refine(F&& f, double lo, double hi, const QuadratureConfig& cfg) {
  Result r;
  r.points = cfg.initial_points;
  r.value = simpson(f, lo, hi, r.points);
  while (r.points < cfg.max_points) {
    const int next = 2 * (r.points - 1) + 1;
    const double refined = simpson(f, lo, hi, next);
    r.last_change = std::abs(refined - r.value);
    r.value = refined;
    r.points = next;
    if (r.last_change <= cfg.rel_tol * std::max(std::abs(refined), 1.0)) {
      r.converged = true;
      break;
    }
  }
  return r;
}

inline void require_converged(const Result& r, const QuadratureConfig& cfg,
                              const std::string& what) {
  if (r.converged) return;
  if (r.last_change > cfg.fail_rel * std::max(std::abs(r.value), 1.0)) {
    throw QuadratureNotConverged(what + ": change " +
                                 std::to_string(r.last_change) + " after " +
                                 std::to_string(r.points) + " points");
  }
}

}  // namespace quadrature

struct Moments {
  double mean;
  double variance;
};

/// First and second central moments by Simpson refinement over the support
/// window. The three integrals (mass, first, second moment) are refined
/// together; each must settle to rel_tol.
inline Moments moments(const PointerDistribution& dist,
                       const QuadratureConfig& cfg = default_quadrature()) {
  const auto [lo, hi] = dist.support(cfg.tail_sigmas);
  quadrature::Result mass, first, second;
  for (int n = cfg.initial_points;; n = 2 * (n - 1) + 1) {
    const double i0 = quadrature::simpson(
        [&](double q) { return dist.density(q); }, lo, hi, n);
    const double i1 = quadrature::simpson(
        [&](double q) { return q * dist.density(q); }, lo, hi, n);
    const double i2 = quadrature::simpson(
        [&](double q) { return q * q * dist.density(q); }, lo, hi, n);
    const bool have_previous = n > cfg.initial_points;
    if (have_previous) {
      mass.last_change = std::abs(i0 - mass.value);
      first.last_change = std::abs(i1 - first.value);
      second.last_change = std::abs(i2 - second.value);
    }
    mass.value = i0;
    first.value = i1;
    second.value = i2;
    mass.points = first.points = second.points = n;
    if (have_previous) {
      const bool ok =
          mass.last_change <= cfg.rel_tol * std::max(std::abs(i0), 1.0) &&
          first.last_change <= cfg.rel_tol * std::max(std::abs(i1), 1.0) &&
          second.last_change <= cfg.rel_tol * std::max(std::abs(i2), 1.0);
      if (ok) {
        mass.converged = first.converged = second.converged = true;
        break;
      }
    }
    if (n >= cfg.max_points) break;
  }
  quadrature::require_converged(mass, cfg, "moments: mass");
  quadrature::require_converged(first, cfg, "moments: first moment");
  quadrature::require_converged(second, cfg, "moments: second moment");
  // The density integrates to 1; a large deficit means the grid never saw
  // the distribution (narrow spikes between nodes) even if the refinement
  // loop settled.
  if (!(mass.value > 0.5)) {
    throw QuadratureNotConverged("moments: grid resolves only " +
                                 std::to_string(mass.value) +
                                 " of the unit probability mass");
  }
  const double mean = first.value / mass.value;
  const double variance =
      std::max(second.value / mass.value - mean * mean, 0.0);
  return Moments{mean, variance};
}

/// Integral of the density over [lo, hi].
inline double probability_mass(const PointerDistribution& dist, double lo,
                               double hi,
                               const QuadratureConfig& cfg = default_quadrature()) {
  auto r = quadrature::refine([&](double q) { return dist.density(q); }, lo,
                              hi, cfg);
  quadrature::require_converged(r, cfg, "probability_mass");
  return r.value;
}

/// Total-variation distance (half the L1 distance) between the distribution
/// and the initial pointer density shifted by `shift`. A shift equal to an
/// exact eigenvalue shift gives 0; disjoint supports give 1.
///
/// |f - g| has kinks where the densities cross, which stalls plain Simpson
/// refinement; the crossings are therefore located first (scan + bisection)
/// and each smooth piece is integrated separately.
inline double shifted_gaussian_distance(
    const PointerDistribution& dist, double shift,
    const QuadratureConfig& cfg = default_quadrature()) {
  if (dist.kind() != Domain::position) {
    throw Error("shifted_gaussian_distance: defined for position densities");
  }
  const GaussianPointer pointer(dist.delta());
  const auto [dlo, dhi] = dist.support(cfg.tail_sigmas);
  const double lo = std::min(dlo, shift - cfg.tail_sigmas * dist.delta());
  const double hi = std::max(dhi, shift + cfg.tail_sigmas * dist.delta());
  const auto diff = [&](double q) {
    return dist.density(q) - initial_density(pointer, q - shift);
  };

  // Locate sign changes of the (smooth) difference on a scan grid; ignore
  // crossings buried in rounding noise of the density scale.
  const int scan_points = 8193;
  const double scan_h = (hi - lo) / (scan_points - 1);
  const double density_scale =
      std::max(1.0 / (dist.delta() * std::sqrt(std::numbers::pi)),
               dist.density(0.5 * (lo + hi)));
  const double noise_floor = 1e-12 * density_scale;
  std::vector<double> cuts{lo};
  double prev_q = lo;
  double prev_d = diff(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double q = lo + i * scan_h;
    const double d = diff(q);
    if ((prev_d < 0.0) != (d < 0.0) &&
        std::max(std::abs(prev_d), std::abs(d)) > noise_floor) {
      double a = prev_q, b = q, fa = prev_d;
      for (int step = 0; step < 80 && b - a > 1e-15 * (hi - lo); ++step) {
        const double m = 0.5 * (a + b);
        const double fm = diff(m);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      cuts.push_back(0.5 * (a + b));
    }
    prev_q = q;
    prev_d = d;
  }
  cuts.push_back(hi);

  double l1 = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    auto r = quadrature::refine(diff, cuts[k], cuts[k + 1], cfg);
    quadrature::require_converged(r, cfg, "shifted_gaussian_distance");
    l1 += std::abs(r.value);
  }
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

struct TabulatedCdf {
  std::vector<double> grid;
  std::vector<double> cdf;  // cdf[i] = P(X <= grid[i]), cdf.back() == 1

  double operator()(double x) const {
    if (x <= grid.front()) return 0.0;
    if (x >= grid.back()) return 1.0;
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  }
};

/// Cumulative distribution tabulated on a uniform grid (trapezoid rule,
/// renormalized so the last entry is exactly 1). Resolution n defaults to
/// 2^16 + 1 points over the support window.
inline TabulatedCdf tabulated_cdf(const PointerDistribution& dist,
                                  int n = (1 << 16) + 1,
                                  const QuadratureConfig& cfg = default_quadrature()) {
  const auto [lo, hi] = dist.support(cfg.tail_sigmas);
  TabulatedCdf out;
  out.grid.resize(static_cast<std::size_t>(n));
  out.cdf.resize(static_cast<std::size_t>(n));
  const double h = (hi - lo) / (n - 1);
  double prev = dist.density(lo);
  double acc = 0.0;
  out.grid[0] = lo;
  out.cdf[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    const double q = lo + i * h;
    const double cur = dist.density(q);
    acc += 0.5 * h * (prev + cur);
    out.grid[static_cast<std::size_t>(i)] = q;
    out.cdf[static_cast<std::size_t>(i)] = acc;
    prev = cur;
  }
  if (!(acc > 0.0)) {
    throw Error("tabulated_cdf: density integrates to zero on its support");
  }
  for (double& c : out.cdf) c /= acc;
  return out;
}

}  // namespace weakmeas
