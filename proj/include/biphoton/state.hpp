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
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "biphoton/errors.hpp"
#include "biphoton/grid.hpp"
#include "biphoton/transfer_curve.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

/// Joint spectral amplitude F(omega_s, omega_i) sampled on a FrequencyGrid.
/// Row index follows the signal axis, column index the idler axis.
class BiphotonAmplitude {
 public:
  BiphotonAmplitude(FrequencyGrid grid, Eigen::MatrixXcd amplitude)
      : grid_(std::move(grid)), amplitude_(std::move(amplitude)) {
    if (static_cast<std::size_t>(amplitude_.rows()) != grid_.n_signal() ||
        static_cast<std::size_t>(amplitude_.cols()) != grid_.n_idler()) {
      throw UsageError("amplitude matrix shape does not match its frequency grid");
    }
    if (!amplitude_.allFinite()) throw DomainError("amplitude entries must be finite");
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXcd& amplitude() const noexcept { return amplitude_; }
  Complex operator()(Eigen::Index s, Eigen::Index i) const { return amplitude_(s, i); }

 private:
  FrequencyGrid grid_;
  Eigen::MatrixXcd amplitude_;
};

// How the quoted pump FWHM (nm) is converted to angular frequency.
enum class PumpBandwidthConvention {
  at_pump,        // FWHM quoted at the pump wavelength (half the degeneracy wavelength)
  at_degeneracy,  // FWHM quoted at the down-converted degeneracy wavelength
};

struct PumpSpec {
  double center_wavelength_nm = 685.0;  // down-converted degeneracy point
  double bandwidth_fwhm_nm = 6.0;
  PumpBandwidthConvention convention = PumpBandwidthConvention::at_degeneracy;

  double pump_wavelength_nm() const { return center_wavelength_nm / 2.0; }

  void validate() const {
    detail::require_positive(center_wavelength_nm, "pump center wavelength");
    detail::require_positive(bandwidth_fwhm_nm, "pump bandwidth");
    if (bandwidth_fwhm_nm >= pump_wavelength_nm()) {
      throw DomainError("pump bandwidth must be below half the center wavelength");
    }
  }

  /// Intensity FWHM of the pump along omega_s + omega_i, rad/fs.
  double bandwidth_rad_fs() const {
    const double at = convention == PumpBandwidthConvention::at_pump ? pump_wavelength_nm()
                                                                     : center_wavelength_nm;
    return bandwidth_nm_to_rad_fs(bandwidth_fwhm_nm, at);
  }
};

struct PhaseMatching {
  enum class Kind { flat, gaussian };
  Kind kind = Kind::flat;
  double width_nm = 0.0;  // FWHM of |Phi|^2 along omega_s - omega_i; gaussian only

  static PhaseMatching flat() { return {}; }
  static PhaseMatching gaussian(double width_nm) { return {Kind::gaussian, width_nm}; }
};

struct FilterSpec {
  double center_wavelength_nm = 685.0;
  double bandwidth_fwhm_nm = 8.0;

  void validate() const {
    detail::require_positive(center_wavelength_nm, "filter center wavelength");
    detail::require_positive(bandwidth_fwhm_nm, "filter bandwidth");
  }

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

namespace detail {
// sigma for exp(-x^2 / (4 sigma^2)) whose square has the given FWHM.
inline double amplitude_sigma_from_intensity_fwhm(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}
}  // namespace detail

/// Gaussian pump factor A = exp(-(ws + wi - wp)^2 / (4 sigma_p^2)); |A|^2 has
/// the pump FWHM along the sum-frequency direction.
inline BiphotonAmplitude pump_envelope(const PumpSpec& pump, const FrequencyGrid& grid) {
  pump.validate();
  const double wp = omega_from_wavelength(pump.pump_wavelength_nm());
  const double sigma = detail::amplitude_sigma_from_intensity_fwhm(pump.bandwidth_rad_fs());
  const double denom = 4.0 * sigma * sigma;
  const auto& ws = grid.signal();
  const auto& wi = grid.idler();
  Eigen::MatrixXcd a(ws.size(), wi.size());
  for (Eigen::Index s = 0; s < a.rows(); ++s) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      const double x = ws[s] + wi[i] - wp;
      a(s, i) = std::exp(-x * x / denom);
    }
  }
  return {grid, std::move(a)};
}

/// Phase-matching factor. `reference_nm` is where the gaussian width is
/// converted to angular frequency (normally the degeneracy wavelength).
inline BiphotonAmplitude phase_matching_envelope(const PhaseMatching& pm, const FrequencyGrid& grid,
                                                 double reference_nm = 685.0) {
  const auto& ws = grid.signal();
  const auto& wi = grid.idler();
  if (pm.kind == PhaseMatching::Kind::flat) {
    return {grid, Eigen::MatrixXcd::Ones(ws.size(), wi.size())};
  }
  detail::require_positive(pm.width_nm, "phase-matching width");
  const double sigma =
      detail::amplitude_sigma_from_intensity_fwhm(bandwidth_nm_to_rad_fs(pm.width_nm, reference_nm));
  const double denom = 4.0 * sigma * sigma;
  Eigen::MatrixXcd phi(ws.size(), wi.size());
  for (Eigen::Index s = 0; s < phi.rows(); ++s) {
    for (Eigen::Index i = 0; i < phi.cols(); ++i) {
      const double x = ws[s] - wi[i];
      phi(s, i) = std::exp(-x * x / denom);
    }
  }
  return {grid, std::move(phi)};
}

/// Gaussian-squared detection filter g(w) = exp(-(w - wf)^2 / sigma_f^2),
/// with sigma_f chosen so g itself has the quoted FWHM.
inline std::vector<double> detection_filter_profile(const FilterSpec& filter,
                                                    std::span<const double> axis) {
  filter.validate();
  const double wf = omega_from_wavelength(filter.center_wavelength_nm);
  const double fwhm = bandwidth_nm_to_rad_fs(filter.bandwidth_fwhm_nm, filter.center_wavelength_nm);
  const double sigma = fwhm / (2.0 * std::sqrt(std::numbers::ln2));
  std::vector<double> g(axis.size());
  for (std::size_t k = 0; k < axis.size(); ++k) {
    const double x = axis[k] - wf;
    g[k] = std::exp(-x * x / (sigma * sigma));
  }
  return g;
}

/// Elementwise product of two amplitudes on the same grid.
inline BiphotonAmplitude hadamard(const BiphotonAmplitude& a, const BiphotonAmplitude& b) {
  if (!(a.grid() == b.grid())) throw UsageError("amplitudes live on different grids");
  return {a.grid(), a.amplitude().cwiseProduct(b.amplitude())};
}

/// Multiplies every row s by profile[s] (a signal-arm factor).
template <typename T>
BiphotonAmplitude apply_signal_profile(const BiphotonAmplitude& state, std::span<const T> profile) {
  if (profile.size() != state.grid().n_signal()) {
    throw UsageError("signal profile length does not match the signal axis");
  }
  Eigen::MatrixXcd out = state.amplitude();
  for (Eigen::Index s = 0; s < out.rows(); ++s) out.row(s) *= Complex(profile[s]);
  return {state.grid(), std::move(out)};
}

/// Multiplies every column i by profile[i] (an idler-arm factor).
template <typename T>
BiphotonAmplitude apply_idler_profile(const BiphotonAmplitude& state, std::span<const T> profile) {
  if (profile.size() != state.grid().n_idler()) {
    throw UsageError("idler profile length does not match the idler axis");
  }
  Eigen::MatrixXcd out = state.amplitude();
  for (Eigen::Index i = 0; i < out.cols(); ++i) out.col(i) *= Complex(profile[i]);
  return {state.grid(), std::move(out)};
}

/// F = A * Phi * g_s(ws) * g_i(wi), the filtered down-converted state.
inline BiphotonAmplitude compose_input_state(const PumpSpec& pump, const PhaseMatching& pm,
                                             const FilterSpec& signal_filter,
                                             const FilterSpec& idler_filter,
                                             const FrequencyGrid& grid) {
  auto state = hadamard(pump_envelope(pump, grid),
                        phase_matching_envelope(pm, grid, pump.center_wavelength_nm));
  const auto gs = detection_filter_profile(signal_filter, grid.signal().values());
  const auto gi = detection_filter_profile(idler_filter, grid.idler().values());
  state = apply_signal_profile(state, std::span<const double>(gs));
  return apply_idler_profile(state, std::span<const double>(gi));
}

/// Propagates the idler through `curve`: column i is multiplied by C(omega_i).
/// The result is not renormalized.
inline BiphotonAmplitude apply_idler_transfer(const BiphotonAmplitude& state,
                                              const TransferCurve& curve) {
  if (!(curve.axis == state.grid().idler())) {
    throw UsageError("transfer curve is not sampled on the state's idler axis");
  }
  return apply_idler_profile(state, std::span<const Complex>(curve.values));
}

/// Joint spectral intensity |F|^2.
inline Eigen::MatrixXd jsi_of(const BiphotonAmplitude& state) {
  return state.amplitude().cwiseAbs2();
}

}  // namespace biphoton
