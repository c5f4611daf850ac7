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
#include "pivotci/simulation.hpp"

namespace {

using namespace pivotci;

StudyConfig small_study(double theta, std::int64_t reps) {
  StudyConfig c;
  c.scheme = TypeIScheme{10, 1.0, 1};
  c.theta_true = theta;
  c.alpha1 = c.alpha2 = 0.05;
  c.replications = reps;
  c.seed = 17;
  return c;
}

TEST(CoverageStudy, CoverageNearNominal) {
  const auto r = run_coverage_study(small_study(1.0, 20000));
  EXPECT_NEAR(r.coverage_hat, 0.90, 3.0 * std::sqrt(0.09 / 20000.0));
  EXPECT_LE(r.p_empty_hat, r.p_infty_hat);
  EXPECT_LT(r.p_infty_hat, r.envelope_bound);
  EXPECT_NEAR(r.envelope_bound, 10.0 * (std::exp(1.0) - 1.0) / (std::exp(10.0) - 1.0), 1e-15);
  EXPECT_EQ(r.replications_used, 20000);
  EXPECT_GT(r.proper_fraction, 0.99);
  EXPECT_TRUE(std::isfinite(r.mean_finite_width));
}

TEST(CoverageStudy, HybridScheme) {
  StudyConfig c = small_study(2.0, 10000);
  c.scheme = HybridTypeIScheme{10, 1.0, 4};
  const auto r = run_coverage_study(c);
  EXPECT_NEAR(r.coverage_hat, 0.90, 3.0 * std::sqrt(0.09 / 10000.0));
  EXPECT_LT(r.p_infty_hat, r.envelope_bound);
}

TEST(CoverageStudy, ConditioningAboveOneFailure) {
  StudyConfig c = small_study(1.0, 5000);
  c.scheme = TypeIScheme{10, 1.0, 3};
  const auto r = run_coverage_study(c);
  EXPECT_NEAR(r.coverage_hat, 0.90, 3.0 * std::sqrt(0.09 / 5000.0));
  EXPECT_GT(r.rejected_draws, 0);
  EXPECT_TRUE(std::isnan(r.envelope_bound));
}

TEST(CoverageStudy, DeterministicAndWorkerInvariant) {
  auto c = small_study(3.0, 5000);
  const auto a = run_coverage_study(c);
  c.workers = 4;
  const auto b = run_coverage_study(c);
  EXPECT_EQ(a.coverage_hat, b.coverage_hat);
  EXPECT_EQ(a.p_infty_hat, b.p_infty_hat);
  EXPECT_EQ(a.p_empty_hat, b.p_empty_hat);
  EXPECT_EQ(a.mean_finite_width, b.mean_finite_width);
  EXPECT_EQ(a.rejected_draws, b.rejected_draws);
  c.seed = 18;
  EXPECT_NE(run_coverage_study(c).mean_finite_width, a.mean_finite_width);
}

TEST(CoverageStudy, SingleReplication) {
  const auto r = run_coverage_study(small_study(1.0, 1));
  EXPECT_EQ(r.replications_used, 1);
  EXPECT_EQ(r.coverage_se, 0.0);
  EXPECT_TRUE(r.coverage_hat == 0.0 || r.coverage_hat == 1.0);
}

TEST(CoverageStudy, ConfigValidation) {
  auto c = small_study(1.0, 10);
  c.alpha1 = 0.6;
  c.alpha2 = 0.5;
  EXPECT_THROW(run_coverage_study(c), std::invalid_argument);
  c = small_study(1.0, 0);
  EXPECT_THROW(run_coverage_study(c), std::invalid_argument);
  c = small_study(-1.0, 10);
  EXPECT_THROW(run_coverage_study(c), std::invalid_argument);
}

TEST(Nonexistence, AgreesWithAnalyticValue) {
  for (double theta : {1.0, 3.0}) {
    for (double u : {0.1, 0.5}) {
      const TypeIScheme s{5, 1.0, 1};
      const auto e = estimate_nonexistence_probability(s, theta, u, 50000, 7, 2);
      EXPECT_NEAR(e.frequency, e.analytic, 3.0 * std::sqrt(e.analytic * (1.0 - e.analytic) / 50000.0) + 1e-12);
      EXPECT_LT(e.frequency, 1.0 - u);
      EXPECT_LT(e.analytic, e.upper_bound);
      EXPECT_GT(e.analytic, 0.0);
    }
  }
}

TEST(Nonexistence, ShrinksAsUApproachesOne) {
  const TypeIScheme s{5, 1.0, 1};
  const auto e = estimate_nonexistence_probability(s, 1.0, 0.999, 20000, 7);
  EXPECT_LT(e.frequency, 0.001);
  EXPECT_LT(e.analytic, 0.001);
}

TEST(EmpiricalCdf, SingleSampleIsAStep) {
  const auto e = empirical_cdf(TypeIScheme{10, 1.0, 1}, 1.0, 1, 5);
  const double x = e.sample().front();
  EXPECT_EQ(e(x - 1e-9), 0.0);
  EXPECT_EQ(e(x), 1.0);
  EXPECT_EQ(e(x + 1.0), 1.0);
}

TEST(EmpiricalCdf, HybridWithRequalsNMatchesTypeI) {
  const auto a = empirical_cdf(TypeIScheme{6, 1.0, 1}, 1.0, 3000, 9);
  const auto b = empirical_cdf(HybridTypeIScheme{6, 1.0, 6}, 1.0, 3000, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a.sample()[i], b.sample()[i]);
}

TEST(EmpiricalCdf, KolmogorovSmirnovAgainstModel) {
  const TypeIScheme s{5, 1.0, 1};
  const auto e = empirical_cdf(s, 1.0, 100000, 11, 4);
  EXPECT_LE(e.ks_distance([&](double y) { return cdf_type1(y, 1.0, s); }), 4.0 / std::sqrt(1e5));
  const HybridTypeIScheme h{8, 1.0, 3};
  const auto eh = empirical_cdf(h, 0.7, 100000, 12, 4);
  EXPECT_LE(eh.ks_distance([&](double y) { return cdf_hybrid(y, 0.7, h); }), 4.0 / std::sqrt(1e5));
}

TEST(BinomialCoverage, ConservativeAtSeveralP) {
  // Exact coverage from the n + 1 intervals, then a simulated check.
  const auto f = binomial_family(10);
  for (double p : {0.05, 0.3, 0.5, 0.77}) {
    double exact = 0.0;
    for (int x = 0; x <= 10; ++x) {
      const auto ci = interval_discrete(f, 0.025, 0.025, x);
      if (ci.contains(p)) exact += oracle::choose(10, x) * std::pow(p, x) * std::pow(1.0 - p, 10 - x);
    }
    EXPECT_GE(exact, 0.95) << p;
    const auto sim = run_binomial_coverage(10, p, 0.025, 0.025, 20000, 3);
    EXPECT_NEAR(sim.coverage, exact, 4.0 * sim.standard_error + 1e-3) << p;
  }
}

} // namespace
