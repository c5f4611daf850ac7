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

#ifndef PIVOTCI_SIMULATION_HPP_
#define PIVOTCI_SIMULATION_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "pivotci/censoring.hpp"
#include "pivotci/conditional_cdf.hpp"
#include "pivotci/families.hpp"
#include "pivotci/pivot.hpp"
#include "pivotci/random.hpp"
#include "pivotci/summation.hpp"

namespace pivotci {

using CensoringScheme = std::variant<TypeIScheme, HybridTypeIScheme>;

struct StudyConfig {
  CensoringScheme scheme = TypeIScheme{};
  double theta_true = 1.0;
  double alpha1 = 0.025;
  double alpha2 = 0.025;
  std::int64_t replications = 10000;
  std::uint64_t seed = 1;
  /// Worker threads. Results do not depend on this value.
  int workers = 1;

  void validate() const {
    std::visit([](const auto& s) { s.validate(); }, scheme);
    if (!(theta_true > 0.0) || !std::isfinite(theta_true))
      throw std::invalid_argument("study needs a positive finite theta_true");
    if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !(alpha1 + alpha2 < 1.0))
      throw std::invalid_argument("study needs alpha1, alpha2 > 0 with alpha1 + alpha2 < 1");
    if (replications < 1) throw std::invalid_argument("study needs at least one replication");
    if (workers < 1) throw std::invalid_argument("study needs at least one worker");
  }
};

struct StudyReport {
  double coverage_hat = 0.0;
  double coverage_se = 0.0;
  /// Mean of upper - lower over proper (finite, non-degenerate) intervals only.
  double mean_finite_width = std::numeric_limits<double>::quiet_NaN();
  double p_infty_hat = 0.0;
  double p_empty_hat = 0.0;
  /// P(D = 1) / P(D >= 1) = n (e^{T/theta} - 1) / (e^{nT/theta} - 1): strict upper
  /// bound on p_infty for type-I with d0 = 1 and hybrid with r > 1. NaN when no
  /// bound of this form applies.
  double envelope_bound = std::numeric_limits<double>::quiet_NaN();
  double proper_fraction = 0.0;
  std::int64_t replications_used = 0;
  /// Outcomes discarded because fewer than d0 failures were observed.
  std::int64_t rejected_draws = 0;
};

namespace detail {

inline constexpr std::int64_t kBlockSize = 1024;
inline constexpr std::int64_t kMaxRejections = 100000000;

/// Runs fn(block_index, begin, end) over fixed-size blocks of [0, total) on
/// `workers` threads. Block boundaries do not depend on the worker count.
inline void for_each_block(std::int64_t total, int workers,
                           const std::function<void(std::size_t, std::int64_t, std::int64_t)>& fn) {
  const auto blocks = static_cast<std::size_t>((total + kBlockSize - 1) / kBlockSize);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) {
      try {
        const std::int64_t begin = static_cast<std::int64_t>(b) * kBlockSize;
        fn(b, begin, std::min(total, begin + kBlockSize));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = blocks;
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), blocks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

inline int conditioning_threshold(const CensoringScheme& scheme) {
  if (const auto* t1 = std::get_if<TypeIScheme>(&scheme)) return t1->d0;
  return 1;
}

/// Draws outcomes from the replication's own stream until D >= d0; returns
/// the MLE and adds the number of discarded outcomes to `rejected`.
inline double conditional_mle(const CensoringScheme& scheme, double theta, std::uint64_t seed,
                              std::uint64_t replication, std::int64_t& rejected) {
  CounterRng rng(seed, replication);
  const int d0 = conditioning_threshold(scheme);
  for (std::int64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    if (const auto* t1 = std::get_if<TypeIScheme>(&scheme)) {
      const auto outcome = simulate_type1(*t1, theta, rng);
      if (outcome.d() >= d0) return mle(outcome, *t1).theta_hat;
    } else {
      const auto& hy = std::get<HybridTypeIScheme>(scheme);
      const auto outcome = simulate_hybrid(hy, theta, rng);
      if (outcome.d() >= d0) return mle(outcome, hy).theta_hat;
    }
    ++rejected;
  }
  throw std::runtime_error("conditioning event D >= d0 is too rare to simulate");
}

inline double envelope_bound(const CensoringScheme& scheme, double theta) {
  int n = 0;
  double T = 0.0;
  if (const auto* t1 = std::get_if<TypeIScheme>(&scheme)) {
    if (t1->d0 != 1) return std::numeric_limits<double>::quiet_NaN();
    n = t1->n;
    T = t1->T;
  } else {
    const auto& hy = std::get<HybridTypeIScheme>(scheme);
    if (hy.r == 1) return 1.0;
    n = hy.n;
    T = hy.T;
  }
  return n * std::expm1(T / theta) / std::expm1(n * T / theta);
}

inline PivotedFamily family_for(const CensoringScheme& scheme) {
  if (const auto* t1 = std::get_if<TypeIScheme>(&scheme)) return type1_family(*t1);
  return hybrid_family(std::get<HybridTypeIScheme>(scheme));
}

} // namespace detail

/*
 * Monte Carlo check of the exact interval. Replication i draws from stream i
 * of the counter-based generator, conditioning on D >= d0 by rejection, and
 * pivots the conditional CDF of the MLE. Tallies are kept per fixed block and
 * combined in block order, so the report is bit-identical for a given seed
 * whatever the number of workers.
 */
inline StudyReport run_coverage_study(const StudyConfig& config) {
  config.validate();
  const PivotedFamily family = detail::family_for(config.scheme);

  struct Tally {
    std::int64_t covered = 0;
    std::int64_t infinite_upper = 0;
    std::int64_t empty = 0;
    std::int64_t proper = 0;
    std::int64_t rejected = 0;
    CompensatedSum width;
  };
  const auto blocks = static_cast<std::size_t>((config.replications + detail::kBlockSize - 1) / detail::kBlockSize);
  std::vector<Tally> tallies(blocks);

  detail::for_each_block(config.replications, config.workers,
                         [&](std::size_t b, std::int64_t begin, std::int64_t end) {
    Tally& t = tallies[b];
    for (std::int64_t i = begin; i < end; ++i) {
      const double theta_hat = detail::conditional_mle(config.scheme, config.theta_true, config.seed,
                                                       static_cast<std::uint64_t>(i), t.rejected);
      const auto ci = interval_continuous(family, config.alpha1, config.alpha2, theta_hat);
      if (ci.contains(config.theta_true)) ++t.covered;
      if (ci.upper_infinite()) ++t.infinite_upper;
      if (ci.empty()) ++t.empty;
      if (ci.proper()) {
        ++t.proper;
        t.width.add(ci.width());
      }
    }
  });

  std::int64_t covered = 0, infinite_upper = 0, empty = 0, proper = 0, rejected = 0;
  CompensatedSum width;
  for (const auto& t : tallies) {
    covered += t.covered;
    infinite_upper += t.infinite_upper;
    empty += t.empty;
    proper += t.proper;
    rejected += t.rejected;
    width.add(t.width.value());
  }

  const auto n = static_cast<double>(config.replications);
  StudyReport report;
  report.coverage_hat = covered / n;
  report.coverage_se = std::sqrt(report.coverage_hat * (1.0 - report.coverage_hat) / n);
  report.p_infty_hat = infinite_upper / n;
  report.p_empty_hat = empty / n;
  report.proper_fraction = proper / n;
  if (proper > 0) report.mean_finite_width = width.value() / static_cast<double>(proper);
  report.envelope_bound = detail::envelope_bound(config.scheme, config.theta_true);
  report.replications_used = config.replications;
  report.rejected_draws = rejected;
  return report;
}

struct NonexistenceEstimate {
  /// Monte Carlo frequency of theta_hat >= (n - 1 + u) T given D >= 1.
  double frequency;
  double standard_error;
  /// 1 - F((n - 1 + u) T; theta | D >= 1).
  double analytic;
  /// The event probability is known to lie in (0, 1 - u).
  double upper_bound;
};

/// Probability that F(theta_hat; theta) = u has no solution in theta, which
/// happens exactly when theta_hat >= (n - 1 + u) T.
inline NonexistenceEstimate estimate_nonexistence_probability(const TypeIScheme& scheme, double theta, double u,
                                                              std::int64_t replications, std::uint64_t seed,
                                                              int workers = 1) {
  scheme.validate();
  detail::check_theta(theta);
  if (scheme.d0 != 1) throw std::invalid_argument("nonexistence probability is defined for d0 = 1");
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("u must lie in (0, 1)");
  if (replications < 1) throw std::invalid_argument("need at least one replication");

  const double threshold = (scheme.n - 1 + u) * scheme.T;
  const CensoringScheme cs = scheme;
  const auto blocks = static_cast<std::size_t>((replications + detail::kBlockSize - 1) / detail::kBlockSize);
  std::vector<std::int64_t> hits(blocks, 0);
  detail::for_each_block(replications, workers, [&](std::size_t b, std::int64_t begin, std::int64_t end) {
    std::int64_t rejected = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      if (detail::conditional_mle(cs, theta, seed, static_cast<std::uint64_t>(i), rejected) >= threshold) ++hits[b];
    }
  });
  std::int64_t total = 0;
  for (auto h : hits) total += h;
  const double freq = static_cast<double>(total) / static_cast<double>(replications);
  return {freq, std::sqrt(freq * (1.0 - freq) / static_cast<double>(replications)),
          1.0 - cdf_type1(threshold, theta, scheme), 1.0 - u};
}

/// Step-function CDF of a sample.
class EmpiricalCdf {
public:
  explicit EmpiricalCdf(std::vector<double> sample) : sample_(std::move(sample)) {
    if (sample_.empty()) throw std::invalid_argument("empirical CDF needs a nonempty sample");
    std::sort(sample_.begin(), sample_.end());
  }

  /// Fraction of the sample <= y.
  double operator()(double y) const {
    const auto it = std::upper_bound(sample_.begin(), sample_.end(), y);
    return static_cast<double>(it - sample_.begin()) / static_cast<double>(sample_.size());
  }

  const std::vector<double>& sample() const noexcept { return sample_; }
  std::size_t size() const noexcept { return sample_.size(); }

  /// Kolmogorov-Smirnov distance sup_y |F_n(y) - F(y)| to a continuous CDF.
  template <typename Cdf>
  double ks_distance(const Cdf& cdf) const {
    const auto n = static_cast<double>(sample_.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample_.size(); ++i) {
      const double f = cdf(sample_[i]);
      d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
  }

private:
  std::vector<double> sample_;
};

/// Sample of MLEs conditional on D >= d0, sample i drawn from stream i.
inline EmpiricalCdf empirical_cdf(const CensoringScheme& scheme, double theta, std::int64_t replications,
                                  std::uint64_t seed, int workers = 1) {
  std::visit([](const auto& s) { s.validate(); }, scheme);
  detail::check_theta(theta);
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  std::vector<double> sample(static_cast<std::size_t>(replications));
  detail::for_each_block(replications, workers, [&](std::size_t, std::int64_t begin, std::int64_t end) {
    std::int64_t rejected = 0;
    for (std::int64_t i = begin; i < end; ++i)
      sample[static_cast<std::size_t>(i)] = detail::conditional_mle(scheme, theta, seed, static_cast<std::uint64_t>(i), rejected);
  });
  return EmpiricalCdf(std::move(sample));
}

struct BinomialCoverage {
  double coverage;
  double standard_error;
};

/// Simulated coverage of the discrete interval for X ~ Binomial(n, p). The
/// n + 1 possible intervals are computed once up front.
inline BinomialCoverage run_binomial_coverage(int n, double p, double alpha1, double alpha2,
                                              std::int64_t replications, std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  const PivotedFamily family = binomial_family(n);
  std::vector<ConfidenceResult> intervals;
  for (int x = 0; x <= n; ++x) intervals.push_back(interval_discrete(family, alpha1, alpha2, x));
  std::int64_t covered = 0;
  for (std::int64_t i = 0; i < replications; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    int x = 0;
    for (int k = 0; k < n; ++k) x += rng.uniform() < p ? 1 : 0;
    if (intervals[static_cast<std::size_t>(x)].contains(p)) ++covered;
  }
  const double c = static_cast<double>(covered) / static_cast<double>(replications);
  return {c, std::sqrt(c * (1.0 - c) / static_cast<double>(replications))};
}

} // namespace pivotci

#endif // PIVOTCI_SIMULATION_HPP_
