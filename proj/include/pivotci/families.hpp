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

#ifndef PIVOTCI_FAMILIES_HPP_
#define PIVOTCI_FAMILIES_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pivotci/censoring.hpp"
#include "pivotci/conditional_cdf.hpp"
#include "pivotci/pivot.hpp"
#include "pivotci/summation.hpp"

namespace pivotci {

// Adapters turning concrete models into PivotedFamily instances.

inline PivotedFamily type1_family(const TypeIScheme& scheme) {
  auto mixture = std::make_shared<const GeneralizedGammaMixture>(type1_mixture(scheme));
  PivotedFamily f;
  f.space = ParameterSpace::positive();
  f.cdf = [mixture](double y, double theta) { return (*mixture)(y, theta); };
  f.limit_low = [](double y) { return limit_at_zero(y); };
  f.limit_high = [scheme](double y) { return limit_at_infinity_type1(y, scheme); };
  f.start = [](double y) { return y; };
  return f;
}

inline PivotedFamily hybrid_family(const HybridTypeIScheme& scheme) {
  auto mixture = std::make_shared<const GeneralizedGammaMixture>(hybrid_mixture(scheme));
  PivotedFamily f;
  f.space = ParameterSpace::positive();
  f.cdf = [mixture](double y, double theta) { return (*mixture)(y, theta); };
  f.limit_low = [](double y) { return limit_at_zero(y); };
  f.limit_high = [mixture](double y) { return mixture->limit_at_infinity(y); };
  f.start = [](double y) { return y; };
  return f;
}

/// Sample mean of n draws from N(theta, sigma^2): F(y; theta) = Phi(sqrt(n) (y - theta) / sigma).
inline PivotedFamily normal_mean_family(double sigma = 1.0, int n = 1) {
  if (!(sigma > 0.0) || n < 1) throw std::invalid_argument("normal mean family needs sigma > 0, n >= 1");
  const double scale = std::sqrt(static_cast<double>(n)) / sigma;
  PivotedFamily f;
  f.space = ParameterSpace::real_line();
  f.cdf = [scale](double y, double theta) {
    return 0.5 * std::erfc(-scale * (y - theta) / std::numbers::sqrt2);
  };
  f.limit_low = [](double) { return 1.0; };
  f.limit_high = [](double) { return 0.0; };
  f.start = [](double y) { return y; };
  return f;
}

enum class LocationBase { normal, logistic };

namespace detail {

inline double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

/// log F0(z) for the standard base distribution, accurate far into both tails.
inline double log_base_cdf(LocationBase base, double z) {
  if (z == -kInf) return -kInf;
  if (z == kInf) return 0.0;
  if (base == LocationBase::logistic) return -softplus(-z);
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z > -30.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  // Mills-ratio asymptotic expansion; truncation error below 1e-12 for z <= -30.
  const double inv2 = 1.0 / (z * z);
  const double series = 1.0 - inv2 * (1.0 - 3.0 * inv2 * (1.0 - 5.0 * inv2 * (1.0 - 7.0 * inv2)));
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

inline double log_base_sf(LocationBase base, double z) { return log_base_cdf(base, -z); }

/// log(F0(a) - F0(b)) for a > b, computed in whichever tail keeps precision.
inline double log_base_diff(LocationBase base, double a, double b) {
  if (!(a > b)) return -kInf;
  if (a <= 0.0) {
    const double la = log_base_cdf(base, a);
    return la + std::log(-std::expm1(log_base_cdf(base, b) - la));
  }
  if (b >= 0.0) {
    const double lb = log_base_sf(base, b);
    return lb + std::log(-std::expm1(log_base_sf(base, a) - lb));
  }
  return std::log(-std::expm1(log_base_sf(base, a)) - std::exp(log_base_cdf(base, b)));
}

} // namespace detail

/*
 * Location family F0(y - theta) truncated to (T1, T2):
 *
 *   F(y; theta) = {F0(y - theta) - F0(T1 - theta)} / {F0(T2 - theta) - F0(T1 - theta)}
 *
 * Whether F(y; .) sweeps all of (0, 1) depends on the tails of F0. The normal
 * base always does. The logistic base, whose tails are exponential, has
 *
 *   theta -> +inf:  {e^{y-T2} - e^{T1-T2}} / {1 - e^{T1-T2}}   (e^{y-T2} if T1 = -inf)
 *   theta -> -inf:  {1 - e^{T1-y}} / {1 - e^{T1-T2}}           (1 - e^{T1-y} if T2 = +inf)
 *
 * so for a given y only a restricted range of alpha has an interior solution.
 */
inline PivotedFamily truncated_location_family(LocationBase base, double t1, double t2) {
  if (std::isnan(t1) || std::isnan(t2) || !(t1 < t2))
    throw std::invalid_argument("truncation bounds need T1 < T2");
  auto check_y = [t1, t2](double y) {
    if (!(y > t1 && y < t2))
      throw std::domain_error("y = " + std::to_string(y) + " lies outside the truncation interval");
  };

  PivotedFamily f;
  f.space = ParameterSpace::real_line();
  f.cdf = [base, t1, t2, check_y](double y, double theta) {
    check_y(y);
    const double num = detail::log_base_diff(base, y - theta, t1 - theta);
    const double den = detail::log_base_diff(base, t2 - theta, t1 - theta);
    return std::clamp(std::exp(num - den), 0.0, 1.0);
  };
  if (base == LocationBase::normal) {
    f.limit_low = [check_y](double y) { check_y(y); return 1.0; };
    f.limit_high = [check_y](double y) { check_y(y); return 0.0; };
  } else {
    f.limit_high = [t1, t2, check_y](double y) {
      check_y(y);
      if (std::isinf(t2)) return 0.0;
      if (std::isinf(t1)) return std::exp(y - t2);
      return (std::exp(y - t2) - std::exp(t1 - t2)) / -std::expm1(t1 - t2);
    };
    f.limit_low = [t1, t2, check_y](double y) {
      check_y(y);
      if (std::isinf(t1)) return 1.0;
      const double num = -std::expm1(t1 - y);
      return std::isinf(t2) ? num : num / -std::expm1(t1 - t2);
    };
  }
  f.start = [](double y) { return y; };
  return f;
}

namespace detail {

inline double binomial_log_pmf(int n, int k, double p) {
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return log_choose + k * std::log(p) + (n - k) * std::log1p(-p);
}

inline int binomial_count(double x, int n) {
  const double k = std::round(x);
  if (k != x || k < 0 || k > n)
    throw std::domain_error("binomial observation must be an integer in [0, n], got " + std::to_string(x));
  return static_cast<int>(k);
}

/// Sum of pmf(k) for k in [from, to]; every term is positive, so no cancellation.
inline double binomial_range(int n, int from, int to, double p) {
  if (p <= 0.0) return from <= 0 && 0 <= to ? 1.0 : 0.0;
  if (p >= 1.0) return from <= n && n <= to ? 1.0 : 0.0;
  CompensatedSum acc;
  for (int k = from; k <= to; ++k) acc.add(std::exp(binomial_log_pmf(n, k, p)));
  return std::clamp(acc.value(), 0.0, 1.0);
}

} // namespace detail

/// X ~ Binomial(n, p) over p in [0, 1], with F(x; p) = P(X <= x) and the
/// survival P(X >= x) for the lower endpoint.
inline PivotedFamily binomial_family(int n) {
  if (n < 1) throw std::invalid_argument("binomial family needs n >= 1");
  PivotedFamily f;
  f.space = ParameterSpace::closed(0.0, 1.0);
  f.cdf = [n](double x, double p) { return detail::binomial_range(n, 0, detail::binomial_count(x, n), p); };
  f.survival = [n](double x, double p) { return detail::binomial_range(n, detail::binomial_count(x, n), n, p); };
  f.limit_low = [n](double x) { detail::binomial_count(x, n); return 1.0; };
  f.limit_high = [n](double x) { return detail::binomial_count(x, n) == n ? 1.0 : 0.0; };
  f.survival_limit_low = [n](double x) { return detail::binomial_count(x, n) == 0 ? 1.0 : 0.0; };
  f.survival_limit_high = [n](double x) { detail::binomial_count(x, n); return 1.0; };
  f.start = [n](double x) { return (x + 0.5) / (n + 1.0); };
  return f;
}

} // namespace pivotci

#endif // PIVOTCI_FAMILIES_HPP_
