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

#ifndef PIVOTCI_CENSORING_HPP_
#define PIVOTCI_CENSORING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pivotci/random.hpp"
#include "pivotci/summation.hpp"

namespace pivotci {

/// Raised when a life test has no observed failure, so the likelihood is
/// monotone in theta and has no maximizer.
class NoMleExists : public std::runtime_error {
public:
  NoMleExists() : std::runtime_error("MLE does not exist; no interval can be formed") {}
};

/// Type-I censoring: n items on test, stopped at the fixed time T. The MLE
/// distribution is conditioned on observing at least d0 failures.
struct TypeIScheme {
  int n = 1;
  double T = 1.0;
  int d0 = 1;

  void validate() const {
    if (n < 1) throw std::invalid_argument("type-I scheme: n must be >= 1");
    if (!(T > 0.0) || !std::isfinite(T))
      throw std::invalid_argument("type-I scheme: T must be positive and finite");
    if (d0 < 1 || d0 > n) throw std::invalid_argument("type-I scheme: d0 must lie in [1, n]");
  }
};

/// Hybrid type-I censoring: stop at min(X_{r:n}, T).
struct HybridTypeIScheme {
  int n = 1;
  double T = 1.0;
  int r = 1;

  void validate() const {
    if (n < 1) throw std::invalid_argument("hybrid scheme: n must be >= 1");
    if (!(T > 0.0) || !std::isfinite(T))
      throw std::invalid_argument("hybrid scheme: T must be positive and finite");
    if (r < 1 || r > n) throw std::invalid_argument("hybrid scheme: r must lie in [1, n]");
  }
};

/// Observed part of a life test: the ordered failure times up to the time the
/// test stopped.
struct LifeTestOutcome {
  std::vector<double> failures;
  double stop_time = 0.0;

  int d() const noexcept { return static_cast<int>(failures.size()); }

  void validate() const {
    if (!(stop_time > 0.0) || !std::isfinite(stop_time))
      throw std::invalid_argument("life-test outcome: stop_time must be positive and finite");
    if (!std::is_sorted(failures.begin(), failures.end()))
      throw std::invalid_argument("life-test outcome: failures must be nondecreasing");
    for (double x : failures) {
      if (!(x > 0.0) || x > stop_time)
        throw std::invalid_argument("life-test outcome: failure times must lie in (0, stop_time]");
    }
  }
};

struct MleEstimate {
  double theta_hat;
};

struct ClosedInterval {
  double lo;
  double hi;

  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

namespace detail {

inline void check_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::domain_error("theta must be positive and finite, got " + std::to_string(theta));
}

inline double mle_from(const LifeTestOutcome& outcome, int n, double stop_time) {
  if (outcome.d() == 0) throw NoMleExists();
  if (outcome.d() > n) throw std::invalid_argument("more failures than items on test");
  CompensatedSum total;
  for (double x : outcome.failures) total.add(x);
  total.add((n - outcome.d()) * stop_time);
  return total.value() / outcome.d();
}

inline std::vector<ClosedInterval> merge_intervals(std::vector<ClosedInterval> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const ClosedInterval& a, const ClosedInterval& b) { return a.lo < b.lo; });
  std::vector<ClosedInterval> merged;
  for (const auto& part : parts) {
    if (!merged.empty() && part.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, part.hi);
    } else {
      merged.push_back(part);
    }
  }
  return merged;
}

} // namespace detail

/// Binomial coefficient as a double; exact while the result fits 53 bits.
inline double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

inline LifeTestOutcome simulate_type1(const TypeIScheme& scheme, double theta, CounterRng& rng) {
  scheme.validate();
  detail::check_theta(theta);
  LifeTestOutcome out;
  out.stop_time = scheme.T;
  out.failures.reserve(static_cast<std::size_t>(scheme.n));
  for (int i = 0; i < scheme.n; ++i) {
    const double x = rng.exponential(theta);
    if (x <= scheme.T) out.failures.push_back(x);
  }
  std::sort(out.failures.begin(), out.failures.end());
  return out;
}

inline LifeTestOutcome simulate_type1(const TypeIScheme& scheme, double theta, std::uint64_t seed,
                                      std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  return simulate_type1(scheme, theta, rng);
}

/// Consumes exactly the same uniforms as simulate_type1 for the same n.
inline LifeTestOutcome simulate_hybrid(const HybridTypeIScheme& scheme, double theta,
                                       CounterRng& rng) {
  scheme.validate();
  detail::check_theta(theta);
  std::vector<double> lifetimes(static_cast<std::size_t>(scheme.n));
  for (auto& x : lifetimes) x = rng.exponential(theta);
  const auto rth = lifetimes.begin() + (scheme.r - 1);
  std::nth_element(lifetimes.begin(), rth, lifetimes.end());
  const double x_r = *rth;

  LifeTestOutcome out;
  out.stop_time = std::min(x_r, scheme.T);
  for (double x : lifetimes) {
    if (x <= out.stop_time) out.failures.push_back(x);
  }
  std::sort(out.failures.begin(), out.failures.end());
  // Ties at X_{r:n} have probability zero; keep the count at r regardless.
  if (x_r <= scheme.T && out.d() > scheme.r) out.failures.resize(static_cast<std::size_t>(scheme.r));
  return out;
}

inline LifeTestOutcome simulate_hybrid(const HybridTypeIScheme& scheme, double theta,
                                       std::uint64_t seed, std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  return simulate_hybrid(scheme, theta, rng);
}

/// theta_hat = (sum of failures + (n - D) T) / D.
inline MleEstimate mle(const LifeTestOutcome& outcome, const TypeIScheme& scheme) {
  scheme.validate();
  for (double x : outcome.failures) {
    if (!(x > 0.0) || x > scheme.T)
      throw std::invalid_argument("type-I failure times must lie in (0, T]");
  }
  return {detail::mle_from(outcome, scheme.n, scheme.T)};
}

/// Same formula with T replaced by the random stopping time min(X_{r:n}, T).
inline MleEstimate mle(const LifeTestOutcome& outcome, const HybridTypeIScheme& scheme) {
  scheme.validate();
  outcome.validate();
  if (outcome.d() > scheme.r)
    throw std::invalid_argument("hybrid outcome has more than r failures");
  if (outcome.stop_time > scheme.T)
    throw std::invalid_argument("hybrid stop_time exceeds T");
  return {detail::mle_from(outcome, scheme.n, outcome.stop_time)};
}

/// Builds a type-I outcome from raw failure times (sorted on the way in).
inline LifeTestOutcome make_type1_outcome(std::vector<double> failures, const TypeIScheme& scheme) {
  scheme.validate();
  std::sort(failures.begin(), failures.end());
  LifeTestOutcome out{std::move(failures), scheme.T};
  out.validate();
  if (out.d() > scheme.n) throw std::invalid_argument("more failures than items on test");
  return out;
}

/// Builds a hybrid outcome; the stop time is X_{r:n} when r failures were seen,
/// otherwise T.
inline LifeTestOutcome make_hybrid_outcome(std::vector<double> failures,
                                           const HybridTypeIScheme& scheme) {
  scheme.validate();
  std::sort(failures.begin(), failures.end());
  if (static_cast<int>(failures.size()) > scheme.r)
    throw std::invalid_argument("hybrid outcome has more than r failures");
  const double stop = static_cast<int>(failures.size()) == scheme.r ? failures.back() : scheme.T;
  LifeTestOutcome out{std::move(failures), stop};
  out.validate();
  return out;
}

/// P_theta(D >= d0) with D ~ Binomial(n, 1 - e^{-T/theta}).
inline double prob_d_at_least(double theta, int n, double T, int d0) {
  detail::check_theta(theta);
  if (d0 <= 0) return 1.0;
  if (d0 > n) return 0.0;
  const double ratio = T / theta;
  if (d0 == 1) return -std::expm1(-n * ratio);
  const double p = -std::expm1(-ratio);
  const double log_p = std::log(p);
  const double log_q = -ratio;
  CompensatedSum acc;
  for (int j = n; j >= d0; --j) {
    acc.add(binomial_coefficient(n, j) * std::exp(j * log_p + (n - j) * log_q));
  }
  return std::min(acc.value(), 1.0);
}

inline double prob_d_at_least(double theta, const TypeIScheme& scheme) {
  scheme.validate();
  return prob_d_at_least(theta, scheme.n, scheme.T, scheme.d0);
}

/// Support of the conditional MLE: union over d = d0..n of [(n-d)T/d, nT/d],
/// merged where the pieces overlap.
inline std::vector<ClosedInterval> support_set(const TypeIScheme& scheme) {
  scheme.validate();
  std::vector<ClosedInterval> parts;
  for (int d = scheme.d0; d <= scheme.n; ++d) {
    parts.push_back({(scheme.n - d) * scheme.T / d, scheme.n * scheme.T / d});
  }
  return detail::merge_intervals(std::move(parts));
}

/// Hybrid support: the type-I pieces for d < r plus [0, nT/r] from stopping
/// at the r-th failure.
inline std::vector<ClosedInterval> support_set(const HybridTypeIScheme& scheme) {
  scheme.validate();
  std::vector<ClosedInterval> parts;
  for (int d = 1; d < scheme.r; ++d) {
    parts.push_back({(scheme.n - d) * scheme.T / d, scheme.n * scheme.T / d});
  }
  parts.push_back({0.0, scheme.n * scheme.T / scheme.r});
  return detail::merge_intervals(std::move(parts));
}

inline bool in_support(double y, const std::vector<ClosedInterval>& support, double rel_tol = 1e-12) {
  return std::any_of(support.begin(), support.end(), [&](const ClosedInterval& s) {
    const double slack = rel_tol * std::max(1.0, std::abs(s.hi));
    return y >= s.lo - slack && y <= s.hi + slack;
  });
}

} // namespace pivotci

#endif // PIVOTCI_CENSORING_HPP_
