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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "biphoton/grid.hpp"
#include "biphoton/units.hpp"

namespace biphoton {
namespace {

// 2 * pi * 299.792458 / lambda, computed independently in double precision.
constexpr double kOmega685 = 2.7498563026406617;
constexpr double kOmega342_5 = 5.499712605281323;

TEST(Units, OmegaFromWavelength) {
  EXPECT_NEAR(omega_from_wavelength(685.0), 2.749857, 1e-5);
  EXPECT_NEAR(omega_from_wavelength(685.0), kOmega685, 1e-14);
  EXPECT_NEAR(omega_from_wavelength(2.0 * std::numbers::pi * kSpeedOfLight), 1.0, 1e-15);
  EXPECT_NEAR(omega_from_wavelength(342.5), 5.499714, 1e-5);
  EXPECT_NEAR(omega_from_wavelength(342.5), kOmega342_5, 1e-14);
  EXPECT_DOUBLE_EQ(omega_from_wavelength(342.5), 2.0 * omega_from_wavelength(685.0));
}

TEST(Units, OmegaIsStrictlyDecreasingInWavelength) {
  double prev = omega_from_wavelength(300.0);
  for (double l = 301.0; l <= 1100.0; l += 1.0) {
    const double w = omega_from_wavelength(l);
    EXPECT_LT(w, prev);
    prev = w;
  }
}

TEST(Units, RejectsNonPhysicalWavelengths) {
  EXPECT_THROW(omega_from_wavelength(0.0), DomainError);
  EXPECT_THROW(omega_from_wavelength(-685.0), DomainError);
  EXPECT_THROW(omega_from_wavelength(std::nan("")), DomainError);
  EXPECT_THROW(omega_from_wavelength(INFINITY), DomainError);
  EXPECT_THROW(wavelength_from_omega(0.0), DomainError);
  EXPECT_THROW(wavelength_from_omega(-1.0), DomainError);
}

TEST(Units, WavelengthFromOmega) {
  EXPECT_NEAR(wavelength_from_omega(2.749857), 685.0, 1e-3);
  EXPECT_NEAR(wavelength_from_omega(1.0), 2.0 * std::numbers::pi * kSpeedOfLight, 1e-12);
  EXPECT_NEAR(wavelength_from_omega(omega_from_wavelength(685.0)), 685.0, 685.0 * 1e-12);
}

TEST(Units, RoundTripOverVisibleAndNearInfrared) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(300.0, 1100.0);
  for (int k = 0; k < 10000; ++k) {
    const double l = dist(rng);
    EXPECT_NEAR(wavelength_from_omega(omega_from_wavelength(l)), l, l * 1e-12);
  }
}

TEST(Units, BandwidthConversion) {
  EXPECT_NEAR(bandwidth_nm_to_rad_fs(8.0, 685.0), 0.032116, 1e-5);
  EXPECT_NEAR(bandwidth_nm_to_rad_fs(6.0, 342.5), 0.096349, 1e-5);
  EXPECT_THROW(bandwidth_nm_to_rad_fs(0.0, 685.0), DomainError);
  EXPECT_THROW(bandwidth_nm_to_rad_fs(8.0, 0.0), DomainError);
  EXPECT_THROW(bandwidth_nm_to_rad_fs(-1.0, 685.0), DomainError);
}

TEST(Units, BandwidthConversionIsLinear) {
  const double unit = bandwidth_nm_to_rad_fs(1.0, 685.0);
  for (double f : {0.25, 0.5, 3.0, 8.0, 17.5}) {
    EXPECT_NEAR(bandwidth_nm_to_rad_fs(f, 685.0), f * unit, f * unit * 1e-12);
  }
}

TEST(Grid, DefaultGridEndpoints) {
  const auto g = build_grid(685.0, 40.0, 512);
  ASSERT_EQ(g.n_signal(), 512u);
  ASSERT_EQ(g.n_idler(), 512u);
  EXPECT_DOUBLE_EQ(g.signal().front(), omega_from_wavelength(705.0));
  EXPECT_DOUBLE_EQ(g.signal().back(), omega_from_wavelength(665.0));
  EXPECT_EQ(g.signal(), g.idler());
}

TEST(Grid, TwoPointGrid) {
  const auto g = build_grid(685.0, 40.0, 2);
  ASSERT_EQ(g.n_signal(), 2u);
  EXPECT_EQ(g.signal()[0], omega_from_wavelength(705.0));
  EXPECT_EQ(g.signal()[1], omega_from_wavelength(665.0));
}

TEST(Grid, UniformSpacing) {
  for (std::size_t n : {2u, 3u, 17u, 256u, 512u, 4096u}) {
    const auto g = build_grid(685.0, 40.0, n);
    const auto& a = g.signal();
    const double h = a.step();
    for (std::size_t k = 1; k < a.size(); ++k) {
      EXPECT_LE(std::abs((a[k] - a[k - 1]) - h), 1e-12 * a[k]);
    }
  }
}

TEST(Grid, IdenticalArgumentsGiveIdenticalGrids) {
  EXPECT_EQ(build_grid(690.0, 33.0, 300), build_grid(690.0, 33.0, 300));
}

TEST(Grid, RejectsInvalidArguments) {
  EXPECT_THROW(build_grid(685.0, 40.0, 1), DomainError);
  EXPECT_THROW(build_grid(685.0, 0.0, 16), DomainError);
  EXPECT_THROW(build_grid(685.0, -5.0, 16), DomainError);
  EXPECT_THROW(build_grid(0.0, 40.0, 16), DomainError);
  EXPECT_THROW(build_grid(10.0, 40.0, 16), DomainError);
}

TEST(Grid, AxisInvariants) {
  EXPECT_THROW(FrequencyAxis({1.0}), DomainError);
  EXPECT_THROW(FrequencyAxis({2.0, 1.0}), DomainError);
  EXPECT_THROW(FrequencyAxis({1.0, 2.0, 4.0}), DomainError);
  EXPECT_THROW(FrequencyAxis({-1.0, 0.0, 1.0}), DomainError);
  EXPECT_NO_THROW(FrequencyAxis({1.0, 2.0, 3.0}));
}

}  // namespace
}  // namespace biphoton
