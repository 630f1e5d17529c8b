// Copyright 2026 The biphoton-cavity Authors
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
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/grid.hpp"

namespace biphoton {

using Complex = std::complex<double>;

/// Sampled complex idler transfer function C(omega) with its derived
/// transmission |C|^2 and unwrapped phase.
struct TransferCurve {
  FrequencyAxis axis;
  std::vector<Complex> values;
  std::vector<double> transmission;
  std::vector<double> phase;
  /// Free-form markers carried into exported files ("strong_coupling", ...).
  std::vector<std::string> flags;

  std::size_t size() const noexcept { return values.size(); }
};

/// Cumulative phase unwrapping with jump threshold pi.
inline void unwrap_in_place(std::vector<double>& phase, std::size_t first, std::size_t last) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double offset = 0.0;
  for (std::size_t k = first + 1; k < last; ++k) {
    const double raw = phase[k] + offset;
    const double jump = raw - phase[k - 1];
    if (jump > std::numbers::pi) {
      offset -= kTwoPi * std::ceil((jump - std::numbers::pi) / kTwoPi);
    } else if (jump < -std::numbers::pi) {
      offset += kTwoPi * std::ceil((-jump - std::numbers::pi) / kTwoPi);
    }
    phase[k] += offset;
  }
}

/// Fills transmission and phase from values. When `split` is a sample index
/// the phase is unwrapped independently on each side of it, so a physical
/// discontinuity there survives.
inline TransferCurve make_curve(FrequencyAxis axis, std::vector<Complex> values,
                                std::optional<std::size_t> split = std::nullopt) {
  if (axis.size() != values.size()) throw UsageError("transfer curve size does not match its axis");
  TransferCurve curve;
  curve.axis = std::move(axis);
  curve.values = std::move(values);
  const std::size_t n = curve.values.size();
  curve.transmission.resize(n);
  curve.phase.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    curve.transmission[k] = std::norm(curve.values[k]);
    curve.phase[k] = std::arg(curve.values[k]);
  }
  if (split && *split < n) {
    unwrap_in_place(curve.phase, 0, *split);
    unwrap_in_place(curve.phase, *split, n);
  } else {
    unwrap_in_place(curve.phase, 0, n);
  }
  return curve;
}

}  // namespace biphoton
