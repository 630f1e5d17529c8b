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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/errors.hpp"
#include "biphoton/grid.hpp"
#include "biphoton/transfer_curve.hpp"
#include "biphoton/units.hpp"

namespace biphoton {

enum class CavityKind { one_sided, two_sided, dicke };

inline const char* to_string(CavityKind kind) {
  switch (kind) {
    case CavityKind::one_sided: return "one_sided";
    case CavityKind::two_sided: return "two_sided";
    case CavityKind::dicke: return "dicke";
  }
  return "unknown";
}

/// Parameters of an idler-arm microcavity. All rates and frequencies in rad/fs.
///
/// `coupling` is the collective light-matter coupling (already carrying the
/// 1/sqrt(N) normalization) and `omega_e` the emitter frequency; both are
/// used by the dicke kind only. `emitter_damping` is an extension beyond the
/// lossless-emitter model and defaults to zero.
struct CavityModel {
  CavityKind kind = CavityKind::two_sided;
  double omega_0 = 0.0;
  double gamma = 0.0;
  double coupling = 0.0;
  double omega_e = 0.0;
  double emitter_damping = 0.0;

  static CavityModel one_sided(double omega_0, double gamma) {
    return {CavityKind::one_sided, omega_0, gamma};
  }
  static CavityModel two_sided(double omega_0, double gamma) {
    return {CavityKind::two_sided, omega_0, gamma};
  }
  static CavityModel dicke(double omega_0, double gamma, double coupling, double omega_e,
                           double emitter_damping = 0.0) {
    return {CavityKind::dicke, omega_0, gamma, coupling, omega_e, emitter_damping};
  }

  void validate() const {
    detail::require_positive(omega_0, "cavity frequency");
    detail::require_positive(gamma, "cavity coupling rate gamma");
    if (kind == CavityKind::dicke) {
      if (!std::isfinite(coupling) || coupling < 0.0) {
        throw DomainError("light-matter coupling must be finite and non-negative");
      }
      detail::require_positive(omega_e, "emitter frequency");
      if (!std::isfinite(emitter_damping) || emitter_damping < 0.0) {
        throw DomainError("emitter damping must be finite and non-negative");
      }
    }
  }

  /// lambda > gamma / 2
  bool strong_coupling() const { return kind == CavityKind::dicke && coupling > gamma / 2.0; }
  bool is_extension() const { return kind == CavityKind::dicke && emitter_damping != 0.0; }

  std::vector<std::string> flags() const {
    std::vector<std::string> f;
    if (kind == CavityKind::dicke) {
      f.emplace_back(strong_coupling() ? "strong_coupling" : "below_strong_coupling");
    }
    if (is_extension()) f.emplace_back("extension");
    return f;
  }
};

namespace detail {
inline void require_kind(const CavityModel& model, CavityKind kind) {
  if (model.kind != kind) {
    throw UsageError(std::string("expected a ") + to_string(kind) + " cavity, got " +
                     to_string(model.kind));
  }
  model.validate();
}

inline Complex two_sided_value(double gamma, double detuning) {
  return Complex(gamma, 0.0) / Complex(gamma, detuning);
}

inline Complex dicke_value(const CavityModel& m, double omega) {
  const double x = omega - m.omega_e;
  if (m.coupling != 0.0 && x == 0.0 && m.emitter_damping == 0.0) return {0.0, 0.0};
  // lambda^2 / (gamma_e + i x)
  const double lam2 = m.coupling * m.coupling;
  const double mag2 = m.emitter_damping * m.emitter_damping + x * x;
  const Complex self_energy(lam2 * m.emitter_damping / mag2, -lam2 * x / mag2);
  const Complex den = Complex(m.gamma, omega - m.omega_0) + (lam2 == 0.0 ? Complex{} : self_energy);
  return Complex(m.gamma, 0.0) / den;
}
}  // namespace detail

/// One-sided (all-pass) cavity, C = (gamma/2 - i d) / (gamma/2 + i d), d = w - w0.
inline TransferCurve one_sided_transfer(const CavityModel& model, const FrequencyAxis& axis) {
  detail::require_kind(model, CavityKind::one_sided);
  std::vector<Complex> c(axis.size());
  const double half = model.gamma / 2.0;
  for (std::size_t k = 0; k < axis.size(); ++k) {
    const double d = axis[k] - model.omega_0;
    c[k] = Complex(half, -d) / Complex(half, d);
  }
  auto curve = make_curve(axis, std::move(c));
  curve.flags = model.flags();
  return curve;
}

/// Two-sided cavity in transmission, C = gamma / (gamma + i d).
inline TransferCurve two_sided_transfer(const CavityModel& model, const FrequencyAxis& axis) {
  detail::require_kind(model, CavityKind::two_sided);
  std::vector<Complex> c(axis.size());
  for (std::size_t k = 0; k < axis.size(); ++k) {
    c[k] = detail::two_sided_value(model.gamma, axis[k] - model.omega_0);
  }
  auto curve = make_curve(axis, std::move(c));
  curve.flags = model.flags();
  return curve;
}

/// Index of the first sample at or above omega_e, if omega_e lies inside the axis.
inline std::optional<std::size_t> emitter_split_index(const CavityModel& model,
                                                      const FrequencyAxis& axis) {
  if (model.omega_e <= axis.front() || model.omega_e > axis.back()) return std::nullopt;
  const auto it = std::lower_bound(axis.begin(), axis.end(), model.omega_e);
  return static_cast<std::size_t>(it - axis.begin());
}

/// Cavity mode coupled to a collective emitter mode:
///   C = gamma / (gamma + i (w - w0) + lambda^2 / (i (w - we) + gamma_e)).
/// A sample exactly at we (lossless emitter, lambda > 0) takes the limit value 0.
/// Phase is unwrapped separately on either side of we.
inline TransferCurve dicke_transfer(const CavityModel& model, const FrequencyAxis& axis) {
  detail::require_kind(model, CavityKind::dicke);
  std::vector<Complex> c(axis.size());
  for (std::size_t k = 0; k < axis.size(); ++k) c[k] = detail::dicke_value(model, axis[k]);
  const bool discontinuous = model.coupling > 0.0 && model.emitter_damping == 0.0;
  auto curve = make_curve(axis, std::move(c),
                          discontinuous ? emitter_split_index(model, axis) : std::nullopt);
  curve.flags = model.flags();
  return curve;
}

inline TransferCurve transfer(const CavityModel& model, const FrequencyAxis& axis) {
  switch (model.kind) {
    case CavityKind::one_sided: return one_sided_transfer(model, axis);
    case CavityKind::two_sided: return two_sided_transfer(model, axis);
    case CavityKind::dicke: return dicke_transfer(model, axis);
  }
  throw UsageError("unknown cavity kind");
}

/// Width of the pi phase transition on the upper-polariton side of the emitter
/// resonance, between 10% and 90% of the step.
struct PhaseStep {
  double width = 0.0;           // rad/fs
  double relative_width = 0.0;  // width / (2 lambda), the fraction of the polariton splitting
};

/// The phase right of we falls from +pi/2 to -pi/2 through the upper polariton;
/// crossings of +0.4 pi and -0.4 pi are located by linear interpolation.
inline PhaseStep phase_step_sharpness(const CavityModel& model, const FrequencyAxis& axis) {
  detail::require_kind(model, CavityKind::dicke);
  if (model.coupling == 0.0) throw DomainError("phase step is undefined without light-matter coupling");
  if (model.emitter_damping != 0.0) {
    throw UsageError("phase step metric assumes a lossless emitter");
  }
  const auto curve = dicke_transfer(model, axis);
  const auto split = emitter_split_index(model, axis);
  if (!split) throw DomainError("emitter resonance lies outside the frequency axis");
  std::size_t start = *split;
  if (axis[start] == model.omega_e) ++start;

  const double hi = 0.4 * std::numbers::pi;
  const double lo = -0.4 * std::numbers::pi;
  const auto& ph = curve.phase;
  if (start >= ph.size() || ph[start] < hi) {
    throw DomainError("axis does not resolve the phase step next to the emitter resonance");
  }
  auto crossing = [&](double level, std::size_t from) -> std::optional<std::pair<double, std::size_t>> {
    for (std::size_t k = from + 1; k < ph.size(); ++k) {
      if (ph[k - 1] >= level && ph[k] < level) {
        const double t = (ph[k - 1] - level) / (ph[k - 1] - ph[k]);
        return std::pair{axis[k - 1] + t * (axis[k] - axis[k - 1]), k};
      }
    }
    return std::nullopt;
  };
  const auto upper = crossing(hi, start);
  if (!upper) throw DomainError("phase never leaves the upper plateau inside the axis");
  const auto lower = crossing(lo, upper->second - 1);
  if (!lower) throw DomainError("phase step does not complete inside the axis");
  PhaseStep step;
  step.width = lower->first - upper->first;
  step.relative_width = step.width / (2.0 * model.coupling);
  return step;
}

}  // namespace biphoton
