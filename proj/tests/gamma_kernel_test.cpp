/*
 * Copyright 2026 The pivotci Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pivotci/gamma_kernel.hpp"

namespace {

using pivotci::reg_lower_gamma_int;

TEST(GammaKernel, ZeroAtLeftEndpoint) { EXPECT_EQ(reg_lower_gamma_int(0.0, 3), 0.0); }

TEST(GammaKernel, ShapeOneIsUnitExponential) {
  EXPECT_NEAR(reg_lower_gamma_int(1.0, 1), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(reg_lower_gamma_int(1.0, 1), 0.63212055882855767, 1e-15);
}

TEST(GammaKernel, MatchesQuadratureOracle) {
  const double expected = oracle::gamma_cdf_quadrature(2.5, 4);
  EXPECT_NEAR(reg_lower_gamma_int(2.5, 4), expected, 1e-12);
}

TEST(GammaKernel, TinyArgumentKeepsRelativePrecision) {
  // G(x; d) ~ x^d / d! as x -> 0.
  const double x = 1e-8;
  EXPECT_NEAR(reg_lower_gamma_int(x, 1) / x, 1.0, 1e-7);
  EXPECT_NEAR(reg_lower_gamma_int(x, 3) / (x * x * x / 6.0), 1.0, 1e-7);
}

TEST(GammaKernel, SaturatesBeyond700) {
  EXPECT_EQ(reg_lower_gamma_int(700.5, 64), 1.0);
  EXPECT_EQ(reg_lower_gamma_int(INFINITY, 5), 1.0);
}

TEST(GammaKernel, DomainErrors) {
  EXPECT_THROW(reg_lower_gamma_int(-0.1, 2), std::domain_error);
  EXPECT_THROW(reg_lower_gamma_int(NAN, 2), std::domain_error);
  EXPECT_THROW(reg_lower_gamma_int(1.0, 0), std::domain_error);
  EXPECT_THROW(reg_lower_gamma_int(1.0, pivotci::kMaxGammaShape + 1), std::domain_error);
  EXPECT_NO_THROW(reg_lower_gamma_int(1.0, pivotci::kMaxGammaShape));
}

TEST(GammaKernel, BoundedAndDecreasingInShape) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ux(0.0, 80.0);
  std::uniform_int_distribution<int> ud(1, 40);
  for (int i = 0; i < 5000; ++i) {
    const double x = ux(gen);
    const int d = ud(gen);
    const double g = reg_lower_gamma_int(x, d);
    ASSERT_GE(g, 0.0);
    ASSERT_LE(g, 1.0);
    ASSERT_GE(g, reg_lower_gamma_int(x, d + 1)) << "x=" << x << " d=" << d;
  }
}

TEST(GammaKernel, StrictlyIncreasingInX) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ux(0.01, 30.0);
  for (int d = 1; d <= 30; ++d) {
    std::vector<double> xs(200);
    for (auto& x : xs) x = ux(gen);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (xs[i] - xs[i - 1] < 1e-6) continue;
      const double a = reg_lower_gamma_int(xs[i - 1], d);
      const double b = reg_lower_gamma_int(xs[i], d);
      // Strictness is only observable while G is not saturated at 1.
      if (b < 1.0 - 1e-12) ASSERT_LT(a, b) << "d=" << d << " x=" << xs[i];
      else ASSERT_LE(a, b);
    }
  }
}

TEST(GammaKernel, ComplementIdentity) {
  for (int d = 1; d <= 30; ++d) {
    for (double x = 0.0; x <= 50.0; x += 0.37) {
      long double tail = 0.0L;
      long double term = std::exp(-static_cast<long double>(x));
      for (int j = 0; j < d; ++j) {
        tail += term;
        term *= x / (j + 1);
      }
      ASSERT_NEAR(1.0 - reg_lower_gamma_int(x, d), static_cast<double>(tail), 1e-12) << "x=" << x << " d=" << d;
    }
  }
}

} // namespace
