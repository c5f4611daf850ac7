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

#include "oracles.hpp"
#include "pivotci/censoring.hpp"

namespace {

using namespace pivotci;

TEST(SimulateTypeI, AllItemsSurviveForHugeMean) {
  const auto out = simulate_type1({3, 1.0, 1}, 1e15, 99);
  EXPECT_EQ(out.d(), 0);
  EXPECT_TRUE(out.failures.empty());
  EXPECT_EQ(out.stop_time, 1.0);
}

TEST(SimulateTypeI, SingleItemFailureFrequency) {
  const TypeIScheme s{1, 1.0, 1};
  int failures = 0;
  const int reps = 1000000;
  for (int seed = 0; seed < reps; ++seed) failures += simulate_type1(s, 1.0, seed).d();
  EXPECT_NEAR(static_cast<double>(failures) / reps, 1.0 - std::exp(-1.0), 0.002);
}

TEST(SimulateTypeI, MeanFailureCount) {
  const TypeIScheme s{5, 2.0, 1};
  CounterRng rng(17);
  double total = 0.0;
  const int reps = 1000000;
  for (int i = 0; i < reps; ++i) total += simulate_type1(s, 1.0, rng).d();
  EXPECT_NEAR(total / reps, 5.0 * (1.0 - std::exp(-2.0)), 0.005);
}

TEST(SimulateTypeI, ReproducibleAndOrdered) {
  const TypeIScheme s{8, 1.5, 1};
  const auto a = simulate_type1(s, 1.0, 123, 7);
  const auto b = simulate_type1(s, 1.0, 123, 7);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_TRUE(std::is_sorted(a.failures.begin(), a.failures.end()));
  for (double x : a.failures) EXPECT_LE(x, s.T);
}

TEST(SimulateTypeI, RejectsInvalidTheta) {
  EXPECT_THROW(simulate_type1({3, 1.0, 1}, 0.0, 1), std::domain_error);
  EXPECT_THROW(simulate_type1({3, 1.0, 1}, -2.0, 1), std::domain_error);
}

TEST(SimulateHybrid, FullRankMatchesTypeI) {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto h = simulate_hybrid({6, 1.0, 6}, 0.7, seed);
    const auto t = simulate_type1({6, 1.0, 1}, 0.7, seed);
    ASSERT_EQ(h.failures, t.failures);
    // T* = min(X_{n:n}, T): equal to T unless every item failed first.
    if (t.d() < 6) {
      ASSERT_EQ(h.stop_time, t.stop_time);
    } else {
      ASSERT_EQ(h.stop_time, t.failures.back());
    }
    if (t.d() > 0) {
      ASSERT_DOUBLE_EQ(mle(h, HybridTypeIScheme{6, 1.0, 6}).theta_hat, mle(t, TypeIScheme{6, 1.0, 1}).theta_hat);
    }
  }
}

TEST(SimulateHybrid, FirstFailureStopsWhenRIsOne) {
  int early = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto out = simulate_hybrid({4, 1.0, 1}, 0.5, seed);
    if (out.d() == 1 && out.stop_time < 1.0) {
      ++early;
      EXPECT_EQ(out.stop_time, out.failures.front());
    } else {
      EXPECT_EQ(out.d(), 0);
      EXPECT_EQ(out.stop_time, 1.0);
    }
  }
  EXPECT_GT(early, 0);
}

TEST(SimulateHybrid, EarlyStopProbabilityMatchesOrderStatistic) {
  const HybridTypeIScheme s{5, 1.0, 3};
  CounterRng rng(4242);
  const int reps = 1000000;
  int early = 0;
  for (int i = 0; i < reps; ++i) {
    const auto out = simulate_hybrid(s, 1.0, rng);
    if (out.d() == 3 && out.stop_time <= s.T) ++early;
  }
  EXPECT_NEAR(static_cast<double>(early) / reps, oracle::exponential_order_statistic_cdf(3, 5, 1.0, 1.0), 0.002);
}

TEST(Mle, TypeIFormula) {
  const TypeIScheme s{3, 2.0, 1};
  EXPECT_DOUBLE_EQ(mle(make_type1_outcome({0.5, 1.2}, s), s).theta_hat, 1.85);
}

TEST(Mle, NoFailuresMeansNoMle) {
  const TypeIScheme s{2, 1.0, 1};
  EXPECT_THROW(mle(make_type1_outcome({}, s), s), NoMleExists);
  try {
    mle(make_type1_outcome({}, s), s);
  } catch (const NoMleExists& e) {
    EXPECT_NE(std::string(e.what()).find("MLE does not exist"), std::string::npos);
  }
}

TEST(Mle, HybridUsesStoppingTime) {
  const HybridTypeIScheme s{4, 5.0, 2};
  const auto out = make_hybrid_outcome({0.3, 0.9}, s);
  EXPECT_EQ(out.stop_time, 0.9);
  EXPECT_DOUBLE_EQ(mle(out, s).theta_hat, 1.5);
}

TEST(Mle, RejectsInconsistentOutcomes) {
  const TypeIScheme s{2, 1.0, 1};
  EXPECT_THROW(make_type1_outcome({0.2, 0.3, 0.4}, s), std::invalid_argument);
  EXPECT_THROW(make_type1_outcome({1.5}, s), std::invalid_argument);
  EXPECT_THROW(make_hybrid_outcome({0.1, 0.2, 0.3}, {5, 1.0, 2}), std::invalid_argument);
}

TEST(ProbDAtLeast, FirstThresholdIsComplementOfNoFailure) {
  const TypeIScheme s{7, 1.3, 1};
  for (double theta : {0.01, 0.5, 2.0, 40.0, 1e6})
    EXPECT_NEAR(prob_d_at_least(theta, s), 1.0 - std::exp(-7 * 1.3 / theta), 1e-15);
}

TEST(ProbDAtLeast, TendsToOneAsThetaVanishes) {
  EXPECT_EQ(prob_d_at_least(1e-4, TypeIScheme{5, 1.0, 5}), 1.0);
}

TEST(ProbDAtLeast, MatchesEnumeration) {
  const double p = 1.0 - std::exp(-1.0 / 2.0);
  EXPECT_NEAR(prob_d_at_least(2.0, TypeIScheme{5, 1.0, 2}), oracle::binomial_upper_tail(5, 2, p), 1e-14);
}

TEST(ProbDAtLeast, StrictlyDecreasingInTheta) {
  const TypeIScheme s{10, 1.0, 3};
  double prev = 1.0;
  for (double theta = 0.3; theta < 1e4; theta *= 1.3) {
    const double p = prob_d_at_least(theta, s);
    ASSERT_LT(p, prev);
    prev = p;
  }
}

TEST(SupportSet, MergesOverlappingPieces) {
  EXPECT_EQ(support_set(TypeIScheme{2, 1.0, 1}), (std::vector<ClosedInterval>{{0.0, 2.0}}));
  // d = 4 gives [T/4, 5T/4] and d = 5 gives [0, T].
  EXPECT_EQ(support_set(TypeIScheme{5, 1.0, 4}), (std::vector<ClosedInterval>{{0.0, 1.25}}));
  EXPECT_EQ(support_set(TypeIScheme{10, 1.0, 10}), (std::vector<ClosedInterval>{{0.0, 1.0}}));
}

TEST(SupportSet, CanBeDisconnected) {
  // n = 3: [2T, 3T], [T/2, 3T/2], [0, T] -> gap (3T/2, 2T).
  const auto s = support_set(TypeIScheme{3, 1.0, 1});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (ClosedInterval{0.0, 1.5}));
  EXPECT_EQ(s[1], (ClosedInterval{2.0, 3.0}));
  EXPECT_FALSE(in_support(1.75, s));
  EXPECT_TRUE(in_support(2.5, s));
}

TEST(SupportSet, Hybrid) {
  EXPECT_EQ(support_set(HybridTypeIScheme{3, 1.0, 1}), (std::vector<ClosedInterval>{{0.0, 3.0}}));
}

} // namespace
