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
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "biphoton/errors.hpp"
#include "biphoton/state.hpp"

namespace biphoton {

/// Schmidt coefficients (descending, sum of squares 1) and derived measures.
struct SchmidtSpectrum {
  std::vector<double> coefficients;
  double entropy = 0.0;          // nats
  double effective_modes = 1.0;  // K = 1 / sum(lambda^4)
};

/// Coefficients smaller than this fraction of the largest are left out of the
/// entropy sum.
inline constexpr double kSchmidtCutoff = 1e-12;

/// sum |F|^2 dws dwi
inline double squared_norm(const BiphotonAmplitude& state) {
  return state.amplitude().squaredNorm() * state.grid().cell_measure();
}

/// Scales the amplitude to unit discrete L2 norm under the grid measure.
inline BiphotonAmplitude normalize(const BiphotonAmplitude& state) {
  const double n2 = squared_norm(state);
  if (!(n2 > 0.0)) throw DegenerateStateError("cannot normalize an all-zero amplitude");
  return {state.grid(), state.amplitude() / std::sqrt(n2)};
}

namespace detail {
inline void require_normalized(const BiphotonAmplitude& state) {
  const double n2 = squared_norm(state);
  if (n2 == 0.0) throw DegenerateStateError("all-zero amplitude has no Schmidt decomposition");
  if (std::abs(n2 - 1.0) > 1e-6) {
    throw UsageError("state is not normalized (squared norm " + std::to_string(n2) + ")");
  }
}

/// Fills the entropy and Schmidt number from coefficients (any order, any scale).
inline SchmidtSpectrum spectrum_from_singular_values(std::vector<double> sv) {
  std::sort(sv.begin(), sv.end(), std::greater<>());
  double total = 0.0;
  for (double s : sv) total += s * s;
  if (!(total > 0.0)) throw DegenerateStateError("all singular values vanish");
  const double scale = 1.0 / std::sqrt(total);
  for (double& s : sv) s = std::max(0.0, s * scale);

  SchmidtSpectrum out;
  const double cutoff = kSchmidtCutoff * sv.front();
  double sum4 = 0.0;
  for (double s : sv) {
    const double p = s * s;
    sum4 += p * p;
    if (s > cutoff) out.entropy -= p * std::log(p);
  }
  out.entropy = std::max(0.0, out.entropy);
  out.effective_modes = 1.0 / sum4;
  out.coefficients = std::move(sv);
  return out;
}
}  // namespace detail

/// Schmidt decomposition of an already-weighted amplitude matrix (cell
/// measure folded in). Used directly for non-uniform measured grids.
inline SchmidtSpectrum schmidt_of_matrix(const Eigen::MatrixXcd& weighted) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);
  const auto& s = svd.singularValues();
  return detail::spectrum_from_singular_values(std::vector<double>(s.data(), s.data() + s.size()));
}

/// Schmidt coefficients of a normalized state via the singular values of
/// F * sqrt(dws dwi), with entropy -sum lambda^2 ln lambda^2.
inline SchmidtSpectrum schmidt_decompose(const BiphotonAmplitude& state) {
  detail::require_normalized(state);
  return schmidt_of_matrix(state.amplitude() * std::sqrt(state.grid().cell_measure()));
}

/// normalize + schmidt_decompose
inline double entropy_of(const BiphotonAmplitude& state) {
  return schmidt_decompose(normalize(state)).entropy;
}

namespace detail {

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  const double scale = a.squaredNorm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-32 * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index r = 0; r < n; ++r) {
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double apr = a(p, r);
          const double aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = a(k, k);
  return ev;
}

}  // namespace detail

/// Entropy from the eigenvalues of the reduced density matrix
/// rho_s = F F^dagger dws dwi. Independent of the SVD route; intended for
/// cross-checking on modest grid sizes (cost grows as (2 n_signal)^3 per sweep).
inline double entropy_oracle(const BiphotonAmplitude& state) {
  detail::require_normalized(state);
  const Eigen::MatrixXcd m = state.amplitude() * std::sqrt(state.grid().cell_measure());
  const Eigen::MatrixXcd rho = m * m.adjoint();
  // A Hermitian H = A + iB shares its spectrum (doubled) with [[A, -B], [B, A]].
  const Eigen::Index n = rho.rows();
  Eigen::MatrixXd embed(2 * n, 2 * n);
  embed.topLeftCorner(n, n) = rho.real();
  embed.bottomRightCorner(n, n) = rho.real();
  embed.topRightCorner(n, n) = -rho.imag();
  embed.bottomLeftCorner(n, n) = rho.imag();
  auto ev = detail::jacobi_eigenvalues(std::move(embed));
  std::sort(ev.begin(), ev.end(), std::greater<>());

  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(n));
  double total = 0.0;
  for (std::size_t k = 0; k < ev.size(); k += 2) {
    p.push_back(std::max(0.0, ev[k]));
    total += p.back();
  }
  const double cutoff = kSchmidtCutoff * kSchmidtCutoff * p.front();
  double s = 0.0;
  for (double v : p) {
    const double q = v / total;
    if (v > cutoff) s -= q * std::log(q);
  }
  return std::max(0.0, s);
}

/// S(after) - S(before), each state normalized independently.
inline double entropy_delta(const BiphotonAmplitude& before, const BiphotonAmplitude& after) {
  return entropy_of(after) - entropy_of(before);
}

}  // namespace biphoton
