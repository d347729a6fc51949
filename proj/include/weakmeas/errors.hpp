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

#include <stdexcept>
#include <string>

namespace weakmeas {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroVector : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotHermitian : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct InvalidSpin : Error {
  using Error::Error;
};

struct ZeroPostSelection : Error {
  using Error::Error;
};

struct QuadratureNotConverged : Error {
  using Error::Error;
};

/// Weak values diverge as the pre/post overlap vanishes; operations refuse
/// below the guard instead of returning huge unstable numbers.
struct OrthogonalSelection : Error {
  OrthogonalSelection(const std::string& what, double overlap_magnitude)
      : Error(what), overlap_magnitude(overlap_magnitude) {}
  double overlap_magnitude;
};

struct IncompatibleSelections : Error {
  using Error::Error;
};

struct TooImprobable : Error {
  TooImprobable(const std::string& what, double estimated_probability)
      : Error(what), estimated_probability(estimated_probability) {}
  double estimated_probability;
};

}  // namespace weakmeas
