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
#include <numbers>

namespace weakmeas {

/// Counter-based splittable random stream.
///
/// Output i of stream (seed, task) is a pure function of (seed, task, i):
/// the generator holds only a mixed key and a counter, so ensembles can be
/// partitioned across workers with `substream(task)` and merged
/// deterministically by task index. Identical seeds reproduce identical
/// draws bit for bit, independent of platform libc.
///
/// The mixer is the 64-bit finalizer used by splitmix64; draw quality is
/// ample for the Monte Carlo sizes used here (<= 1e8 per stream).
class SplitStream {
 public:
  explicit SplitStream(std::uint64_t seed)
      : key_(mix(seed + kGolden)), counter_(0) {}

  /// Independent stream derived from (this stream's key, task index).
  SplitStream substream(std::uint64_t task) const {
    SplitStream s(0);
    s.key_ = mix(key_ ^ mix(task * kGolden + kGolden));
    s.counter_ = 0;
    return s;
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller. Always consumes exactly two uniforms,
  /// so the draw sequence does not depend on call history.
  double next_gaussian() {
    // (0, 1] for the log argument.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace weakmeas
