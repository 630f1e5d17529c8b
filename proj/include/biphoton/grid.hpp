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
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

/// Uniform axis of angular frequencies (rad/fs), strictly increasing.
class FrequencyAxis {
 public:
  FrequencyAxis() = default;

  explicit FrequencyAxis(std::vector<double> samples) : samples_(std::move(samples)) {
    validate();
  }

  /// `n` points from `first` to `last` inclusive.
  static FrequencyAxis linspace(double first, double last, std::size_t n) {
    if (n < 2) throw DomainError("a frequency axis needs at least 2 points");
    if (!(last > first)) throw DomainError("frequency axis must be increasing");
    std::vector<double> s(n);
    const double step = (last - first) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) s[k] = first + step * static_cast<double>(k);
    s.back() = last;
    return FrequencyAxis(std::move(s));
  }

  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t k) const { return samples_[k]; }
  double front() const { return samples_.front(); }
  double back() const { return samples_.back(); }
  double step() const { return (back() - front()) / static_cast<double>(size() - 1); }
  std::span<const double> values() const noexcept { return samples_; }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  friend bool operator==(const FrequencyAxis&, const FrequencyAxis&) = default;

 private:
  void validate() const {
    if (samples_.size() < 2) throw DomainError("a frequency axis needs at least 2 points");
    for (double w : samples_) {
      if (!std::isfinite(w) || w <= 0.0) {
        throw DomainError("frequency axis values must be finite and positive");
      }
    }
    const double h = step();
    if (!(h > 0.0)) throw DomainError("frequency axis must be strictly increasing");
    for (std::size_t k = 1; k < samples_.size(); ++k) {
      const double d = samples_[k] - samples_[k - 1];
      // Spacing is constant to 1e-12 relative to the sample magnitude.
      const double tol = 1e-12 * samples_[k];
      if (!(d > 0.0) || std::abs(d - h) > tol) {
        throw DomainError("frequency axis must be uniformly spaced");
      }
    }
  }

  std::vector<double> samples_;
};

/// Signal x idler angular-frequency domain of a biphoton amplitude.
/// Rows of every amplitude matrix follow the signal axis, columns the idler axis.
class FrequencyGrid {
 public:
  FrequencyGrid(FrequencyAxis signal, FrequencyAxis idler)
      : signal_(std::move(signal)), idler_(std::move(idler)) {
    if (signal_.size() < 2 || idler_.size() < 2) {
      throw DomainError("frequency grid axes need at least 2 points");
    }
  }

  const FrequencyAxis& signal() const noexcept { return signal_; }
  const FrequencyAxis& idler() const noexcept { return idler_; }
  std::size_t n_signal() const noexcept { return signal_.size(); }
  std::size_t n_idler() const noexcept { return idler_.size(); }

  /// Area of one grid cell, d(omega_s) * d(omega_i).
  double cell_measure() const { return signal_.step() * idler_.step(); }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  FrequencyAxis signal_;
  FrequencyAxis idler_;
};

/// Square n x n grid uniform in angular frequency, covering
/// [omega(center + span/2), omega(center - span/2)] on both axes.
inline FrequencyGrid build_grid(double center_nm, double span_nm, std::size_t n) {
  detail::require_positive(center_nm, "grid center");
  detail::require_positive(span_nm, "grid span");
  if (n < 2) throw DomainError("grid needs at least 2 points per axis");
  if (span_nm / 2.0 >= center_nm) throw DomainError("grid span must be smaller than twice the center");
  const double lo = omega_from_wavelength(center_nm + span_nm / 2.0);
  const double hi = omega_from_wavelength(center_nm - span_nm / 2.0);
  auto axis = FrequencyAxis::linspace(lo, hi, n);
  return FrequencyGrid(axis, axis);
}

}  // namespace biphoton
