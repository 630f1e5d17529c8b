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
#include <numbers>
#include <string>

#include "biphoton/errors.hpp"

// Unit bridge between the nm/fs quantities used in configs and the
// angular-frequency (rad/fs) domain the simulation runs in.
namespace biphoton {

/// Speed of light in nm/fs.
inline constexpr double kSpeedOfLight = 299.792458;

namespace detail {
inline void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}
}  // namespace detail

/// Angular frequency (rad/fs) of light with vacuum wavelength `wavelength_nm`.
inline double omega_from_wavelength(double wavelength_nm) {
  detail::require_positive(wavelength_nm, "wavelength");
  return 2.0 * std::numbers::pi * kSpeedOfLight / wavelength_nm;
}

/// Inverse of omega_from_wavelength.
inline double wavelength_from_omega(double omega) {
  detail::require_positive(omega, "angular frequency");
  return 2.0 * std::numbers::pi * kSpeedOfLight / omega;
}

/// First-order conversion of a wavelength FWHM to an angular-frequency FWHM,
/// evaluated at `center_nm`.
inline double bandwidth_nm_to_rad_fs(double fwhm_nm, double center_nm) {
  detail::require_positive(fwhm_nm, "bandwidth");
  detail::require_positive(center_nm, "center wavelength");
  return 2.0 * std::numbers::pi * kSpeedOfLight * fwhm_nm / (center_nm * center_nm);
}

}  // namespace biphoton
