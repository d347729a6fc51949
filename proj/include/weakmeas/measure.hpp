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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weakmeas/config.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/qcore.hpp"
#include "weakmeas/rng.hpp"
#include "weakmeas/tsvf.hpp"

namespace weakmeas {

/// Pointer readings collected from an ensemble. `attempted_count` includes
/// runs discarded by a failed post-selection (or rejected proposals in
/// direct mode); `readings` holds the kept ones.
struct MeasurementRecord {
  std::vector<double> readings;
  std::uint64_t postselected_count = 0;
  std::uint64_t attempted_count = 0;
  std::uint64_t seed = 0;
};

struct StrongOutcome {
  double value;
  StateVector collapsed;
};

/// Ideal measurement with collapse: eigenvalue a_g with Born probability
/// ||Pi_g psi||^2, state projected onto that eigenspace and renormalized.
inline StrongOutcome strong_measure(const Observable& a, const StateVector& psi,
                                    SplitStream& rng,
                                    const Tolerances& tol = default_tolerances()) {
  const std::vector<double> weights = born_weights(a, psi);
  const double u = rng.next_uniform();
  double acc = 0.0;
  std::size_t pick = weights.size() - 1;  // guard against rounding shortfall
  for (std::size_t g = 0; g < weights.size(); ++g) {
    acc += weights[g];
    if (u < acc) {
      pick = g;
      break;
    }
  }
  return StrongOutcome{
      a.groups()[pick].value,
      make_state(a.project_group(static_cast<int>(pick), psi.amplitudes()),
                 tol)};
}

/// Probability that the post-selection succeeds.
///
/// Without a pointer this is |<post|pre>|^2. With a pointer it accounts for
/// the decoherence induced by the interaction:
///   sum_{g,h} beta_g conj(beta_h) exp(-(a_g - a_h)^2 / 4 delta^2),
/// which increases to |<post|pre>|^2 as delta grows.
inline double postselection_probability(
    const Observable& a, const TwoStateVector& tsv,
    const std::optional<GaussianPointer>& pointer = std::nullopt) {
  if (!pointer) {
    return std::min(std::norm(tsv.overlap()), 1.0);
  }
  const std::vector<Complex> betas = transition_amplitudes(a, tsv);
  std::vector<double> centers(betas.size());
  for (std::size_t g = 0; g < betas.size(); ++g) {
    centers[g] = a.groups()[g].value;
  }
  return std::min(postselection_weight(betas, centers, pointer->delta), 1.0);
}

/// n independent pointer readings for a pre-selected system: pick an
/// eigengroup by Born weight, then read a Gaussian centered at its
/// eigenvalue with standard deviation delta / sqrt(2).
inline MeasurementRecord sample_preselected(const Observable& a,
                                            const StateVector& psi,
                                            const GaussianPointer& pointer,
                                            std::uint64_t n,
                                            std::uint64_t seed) {
  const std::vector<double> weights = born_weights(a, psi);
  const double sigma = pointer.delta / std::numbers::sqrt2;
  SplitStream rng = SplitStream(seed).substream(0);
  MeasurementRecord record;
  record.seed = seed;
  record.readings.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double u = rng.next_uniform();
    double acc = 0.0;
    std::size_t pick = weights.size() - 1;
    for (std::size_t g = 0; g < weights.size(); ++g) {
      acc += weights[g];
      if (u < acc) {
        pick = g;
        break;
      }
    }
    record.readings.push_back(a.groups()[pick].value +
                              sigma * rng.next_gaussian());
  }
  record.postselected_count = n;
  record.attempted_count = n;
  return record;
}

enum class SamplingMode {
  /// Simulate the laboratory procedure: draw a joint (system, pointer)
  /// outcome, then keep the reading only when the post-selection succeeds.
  /// Honest about the cost of rare post-selections.
  physical,
  /// Sample the conditional reading density directly by rejection from a
  /// Gaussian-mixture envelope. Makes rare post-selections testable.
  direct,
};

namespace detail {

struct CoherentTarget {
  std::vector<Complex> betas;
  std::vector<double> centers;
  double delta;

  // Unnormalized conditional density |sum_g beta_g exp(-(q-a_g)^2/2d^2)|^2.
  double operator()(double q) const {
    Complex amp = 0.0;
    for (std::size_t g = 0; g < centers.size(); ++g) {
      const double dq = q - centers[g];
      amp += betas[g] * std::exp(-dq * dq / (2.0 * delta * delta));
    }
    return std::norm(amp);
  }
};

}  // namespace detail

/// Pointer readings conditioned on a successful post-selection.
///
/// Physical mode repeats the full experiment until n_target readings
/// survive; it requires the success probability to exceed tol.improbable
/// and throws TooImprobable when the attempt budget runs out. Direct mode
/// needs only n_target accepted draws from the conditional density itself.
/// Both modes produce readings distributed per
/// postselected_distribution(..., Domain::position).
inline MeasurementRecord sample_postselected(
    const Observable& a, const TwoStateVector& tsv,
    const GaussianPointer& pointer, std::uint64_t n_target, std::uint64_t seed,
    SamplingMode mode = SamplingMode::direct,
    const Tolerances& tol = default_tolerances()) {
  const std::vector<Complex> betas = transition_amplitudes(a, tsv);
  std::vector<double> centers(betas.size());
  for (std::size_t g = 0; g < betas.size(); ++g) {
    centers[g] = a.groups()[g].value;
  }
  const double success = postselection_weight(betas, centers, pointer.delta);
  const double sigma = pointer.delta / std::numbers::sqrt2;
  const detail::CoherentTarget target{betas, centers, pointer.delta};

  MeasurementRecord record;
  record.seed = seed;
  record.readings.reserve(n_target);
  SplitStream rng = SplitStream(seed).substream(0);

  if (mode == SamplingMode::physical) {
    if (!(success > tol.improbable)) {
      throw TooImprobable(
          "sample_postselected: post-selection probability " +
              std::to_string(success) +
              " below physical-mode floor; use direct mode",
          success);
    }
    const std::vector<double> weights = born_weights(a, tsv.pre());
    while (record.readings.size() < n_target) {
      if (record.attempted_count >= tol.attempt_cap) {
        throw TooImprobable(
            "sample_postselected: attempt cap " +
                std::to_string(tol.attempt_cap) + " exceeded; success "
                "probability " + std::to_string(success),
            success);
      }
      ++record.attempted_count;
      // Joint draw: eigengroup by Born weight, reading from its Gaussian.
      const double u = rng.next_uniform();
      double acc = 0.0;
      std::size_t pick = weights.size() - 1;
      for (std::size_t g = 0; g < weights.size(); ++g) {
        acc += weights[g];
        if (u < acc) {
          pick = g;
          break;
        }
      }
      const double q = centers[pick] + sigma * rng.next_gaussian();
      // Conditional success probability of the post-selection given the
      // reading q: |<post|chi(q)>|^2 / ||chi(q)||^2.
      double norm2 = 0.0;
      for (std::size_t g = 0; g < centers.size(); ++g) {
        const double dq = q - centers[g];
        norm2 += weights[g] * std::exp(-dq * dq / (sigma * sigma * 2.0));
      }
      const double p_accept = norm2 > 0.0 ? target(q) / norm2 : 0.0;
      if (rng.next_uniform() < p_accept) {
        record.readings.push_back(q);
      }
    }
    record.postselected_count = record.readings.size();
    return record;
  }

  // Direct mode: rejection from the |beta|^2-weighted mixture envelope.
  if (!(success > tol.zero_postselection)) {
    throw ZeroPostSelection(
        "sample_postselected: post-selection probability underflows");
  }
  double beta2_sum = 0.0;
  for (const Complex& b : betas) beta2_sum += std::norm(b);
  std::vector<double> mix_weights(betas.size());
  for (std::size_t g = 0; g < betas.size(); ++g) {
    mix_weights[g] = std::norm(betas[g]) / beta2_sum;
  }
  const auto envelope = [&](double q) {
    double m = 0.0;
    for (std::size_t g = 0; g < centers.size(); ++g) {
      const double dq = q - centers[g];
      m += mix_weights[g] *
           std::exp(-dq * dq / (pointer.delta * pointer.delta));
    }
    return m * beta2_sum;
  };
  // Grid scan for the worst target/envelope ratio, inflated by 5%. The
  // ratio is bounded by (sum |beta_g|)^2 / sum |beta_g|^2 and is smooth, so
  // a dense scan over the support window is reliable.
  const auto [lo, hi] =
      PointerDistribution(Domain::position, PointerDistribution::Form::coherent,
                          betas, centers, pointer.delta, 1.0)
          .support();
  double worst = 0.0;
  const int scan_points = 16385;
  for (int i = 0; i < scan_points; ++i) {
    const double q = lo + (hi - lo) * i / (scan_points - 1);
    const double env = envelope(q);
    if (env > 0.0) {
      worst = std::max(worst, target(q) / env);
    }
  }
  const double bound = 1.05 * worst;
  while (record.readings.size() < n_target) {
    ++record.attempted_count;
    const double u = rng.next_uniform();
    double acc = 0.0;
    std::size_t pick = mix_weights.size() - 1;
    for (std::size_t g = 0; g < mix_weights.size(); ++g) {
      acc += mix_weights[g];
      if (u < acc) {
        pick = g;
        break;
      }
    }
    const double q = centers[pick] + sigma * rng.next_gaussian();
    const double env = envelope(q);
    if (env <= 0.0) continue;
    if (rng.next_uniform() * bound * env < target(q)) {
      record.readings.push_back(q);
    }
  }
  record.postselected_count = record.readings.size();
  return record;
}

/// How much the interaction changes the measured system:
/// 1 - <psi|rho'|psi> with rho' the post-interaction reduced state,
///   <psi|rho'|psi> = sum_{g,h} w_g w_h exp(-(a_g - a_h)^2 / 4 delta^2).
/// Zero for eigenstates; decreasing in delta; at most 1 - sum_g w_g^2.
inline double disturbance(const Observable& a, const StateVector& psi,
                          const GaussianPointer& pointer) {
  const std::vector<double> weights = born_weights(a, psi);
  const double d2 = pointer.delta * pointer.delta;
  double fidelity = 0.0;
  for (std::size_t g = 0; g < weights.size(); ++g) {
    fidelity += weights[g] * weights[g];
    for (std::size_t h = g + 1; h < weights.size(); ++h) {
      const double gap = a.groups()[g].value - a.groups()[h].value;
      fidelity +=
          2.0 * weights[g] * weights[h] * std::exp(-gap * gap / (4.0 * d2));
    }
  }
  return std::clamp(1.0 - fidelity, 0.0, 1.0);
}

}  // namespace weakmeas
