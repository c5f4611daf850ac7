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

#include "pivotci/random.hpp"

namespace {

using pivotci::CounterRng;

TEST(CounterRng, PhiloxKnownAnswer) {
  // Random123 known-answer vector for philox4x32-10 with zero key and counter.
  const CounterRng rng(0, 0);
  const auto block = rng.block(0);
  EXPECT_EQ(block[0], 0x6627e8d5u);
  EXPECT_EQ(block[1], 0xe169c58du);
  EXPECT_EQ(block[2], 0xbc57ac4cu);
  EXPECT_EQ(block[3], 0x9b00dbd8u);
}

TEST(CounterRng, ReproducibleAndStreamSeparated) {
  CounterRng a(42, 3), b(42, 3), c(42, 4);
  int same_as_other_stream = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    ASSERT_EQ(x, b.uniform());
    if (x == c.uniform()) ++same_as_other_stream;
  }
  EXPECT_EQ(same_as_other_stream, 0);
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(2026, 0);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum2 += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum2 / n, 1.0 / 3.0, 0.002);
}

TEST(CounterRng, ExponentialMean) {
  CounterRng rng(5, 1);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential(2.0);
  EXPECT_NEAR(sum / n, 2.0, 5 * 2.0 / std::sqrt(n));
}

} // namespace
