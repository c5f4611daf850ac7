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

#ifndef PIVOTCI_CONDITIONAL_CDF_HPP_
#define PIVOTCI_CONDITIONAL_CDF_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pivotci/censoring.hpp"
#include "pivotci/gamma_kernel.hpp"
#include "pivotci/summation.hpp"

namespace pivotci {

/// Cancellation ratio (sum |terms| / |sum|) above which an evaluation is
/// flagged as numerically unreliable.
inline constexpr double kCancellationWarning = 1e6;

/// Largest n for which the alternating mixtures are validated in double
/// precision. Beyond it every evaluation carries a stability warning.
inline constexpr int kValidatedMaxN = 25;

/// One signed, shifted gamma CDF term:
///   coefficient * exp(-exp_rate * T / theta) * G((shape * y - shift * T) / theta; shape)
struct GammaMixtureTerm {
  double coefficient;
  int shape;
  double shift;
  double exp_rate;
};

struct MixtureEvaluation {
  double value;
  double cancellation;
  bool stability_warning;
};

/*
 * Generalized (signed-weight) mixture of shifted gamma CDFs divided by
 * P_theta(D >= d0), the form taken by the conditional CDF of the exponential
 * MLE under type-I and hybrid type-I censoring.
 */
class GeneralizedGammaMixture {
public:
  GeneralizedGammaMixture(std::vector<GammaMixtureTerm> terms, int n, double T, int d0,
                          double support_upper)
      : terms_(std::move(terms)), n_(n), T_(T), d0_(d0), support_upper_(support_upper) {}

  int n() const noexcept { return n_; }
  double T() const noexcept { return T_; }
  int d0() const noexcept { return d0_; }
  double support_upper() const noexcept { return support_upper_; }
  const std::vector<GammaMixtureTerm>& terms() const noexcept { return terms_; }

  double normalizer(double theta) const { return prob_d_at_least(theta, n_, T_, d0_); }

  MixtureEvaluation evaluate(double y, double theta) const {
    if (!(y > 0.0)) throw std::domain_error("conditional CDF: y must be positive, got " + std::to_string(y));
    detail::check_theta(theta);
    const bool beyond_range = n_ > kValidatedMaxN;
    if (y >= support_upper_) return {1.0, 1.0, beyond_range};

    const double norm = normalizer(theta);
    // Far in the theta -> infinity regime the normalizer underflows; the
    // distance to the limit there is O(T / theta), far below double resolution.
    if (norm < 1e-250) return {limit_at_infinity(y), 1.0, beyond_range};

    std::vector<double> parts;
    parts.reserve(terms_.size());
    for (const auto& term : terms_) {
      const double x = (term.shape * y - term.shift * T_) / theta;
      if (x <= 0.0) continue;
      const double g = reg_lower_gamma_int(x, term.shape);
      if (g == 0.0) continue;
      parts.push_back(term.coefficient * std::exp(-term.exp_rate * T_ / theta) * g);
    }
    const SignedSum total = sum_ascending_magnitude(parts);
    const double cancellation = total.cancellation();
    return {std::clamp(total.value / norm, 0.0, 1.0), cancellation,
            beyond_range || cancellation > kCancellationWarning};
  }

  double operator()(double y, double theta) const { return evaluate(y, theta).value; }

  /*
   * Limit as theta -> infinity, term by term: each G(.; shape) / P(D >= d0)
   * vanishes unless shape == d0, in which case it tends to
   *   (n - d0)! / n! * {shape * y - shift * T}_+^{d0} / T^{d0}.
   */
  double limit_at_infinity(double y) const {
    if (!(y > 0.0)) throw std::domain_error("limit: y must be positive");
    if (y > support_upper_) return 1.0;
    const long double scale = std::exp(std::lgamma(n_ - d0_ + 1.0) - std::lgamma(n_ + 1.0));
    long double acc = 0.0L;
    for (const auto& term : terms_) {
      if (term.shape != d0_) continue;
      const long double a = (static_cast<long double>(term.shape) * y - term.shift * T_) / T_;
      if (a <= 0.0L) continue;
      acc += term.coefficient * scale * std::pow(a, static_cast<long double>(d0_));
    }
    return std::clamp(static_cast<double>(acc), 0.0, 1.0);
  }

private:
  std::vector<GammaMixtureTerm> terms_;
  int n_;
  double T_;
  int d0_;
  double support_upper_;
};

/// Conditional CDF of the type-I MLE given D >= d0, as a double sum over
/// d = d0..n and nu = 0..d.
inline GeneralizedGammaMixture type1_mixture(const TypeIScheme& scheme) {
  scheme.validate();
  std::vector<GammaMixtureTerm> terms;
  for (int d = scheme.d0; d <= scheme.n; ++d) {
    const double outer = binomial_coefficient(scheme.n, d);
    for (int nu = 0; nu <= d; ++nu) {
      const double sign = nu % 2 == 0 ? 1.0 : -1.0;
      const double shift = scheme.n - d + nu;
      terms.push_back({sign * outer * binomial_coefficient(d, nu), d, shift, shift});
    }
  }
  return {std::move(terms), scheme.n, scheme.T, scheme.d0, scheme.n * scheme.T / scheme.d0};
}

/// Conditional CDF of the hybrid type-I MLE given D >= 1: type-I terms for
/// d < r, the stop-at-X_{r:n} correction terms, and G(r y / theta; r).
inline GeneralizedGammaMixture hybrid_mixture(const HybridTypeIScheme& scheme) {
  scheme.validate();
  const int n = scheme.n;
  const int r = scheme.r;
  std::vector<GammaMixtureTerm> terms;
  for (int d = 1; d <= r - 1; ++d) {
    const double outer = binomial_coefficient(n, d);
    for (int nu = 0; nu <= d; ++nu) {
      const double sign = nu % 2 == 0 ? 1.0 : -1.0;
      const double shift = n - d + nu;
      terms.push_back({sign * outer * binomial_coefficient(d, nu), d, shift, shift});
    }
  }
  const double lead = r * binomial_coefficient(n, r);
  for (int nu = 1; nu <= r; ++nu) {
    const double sign = nu % 2 == 0 ? 1.0 : -1.0;
    const double shift = n - r + nu;
    terms.push_back({sign * lead * binomial_coefficient(r - 1, nu - 1) / shift, r, shift, shift});
  }
  terms.push_back({1.0, r, 0.0, 0.0});
  return {std::move(terms), n, scheme.T, 1, n * scheme.T};
}

inline MixtureEvaluation cdf_type1_eval(double y, double theta, const TypeIScheme& scheme) {
  return type1_mixture(scheme).evaluate(y, theta);
}

/// F(y; theta | D >= d0) for the type-I censored MLE.
inline double cdf_type1(double y, double theta, const TypeIScheme& scheme) {
  return cdf_type1_eval(y, theta, scheme).value;
}

inline MixtureEvaluation cdf_hybrid_eval(double y, double theta, const HybridTypeIScheme& scheme) {
  return hybrid_mixture(scheme).evaluate(y, theta);
}

/// F_r(y; theta | D >= 1) for the hybrid type-I censored MLE; 1 for y >= nT.
inline double cdf_hybrid(double y, double theta, const HybridTypeIScheme& scheme) {
  return cdf_hybrid_eval(y, theta, scheme).value;
}

/*
 * Closed-form theta -> infinity limit of the type-I conditional CDF:
 *
 *   0                                                          y <= (n-d0)T/d0
 *   sum_{nu<d0} (-1)^nu {d0 y - (n-d0+nu)T}_+^{d0} / (nu! (d0-nu)! T^{d0})
 *                                                   (n-d0)T/d0 < y <= nT/d0
 *   1                                                          y >  nT/d0
 *
 * At y = nT/d0 the sum collapses to a Stirling number of the second kind,
 * S(d0, d0) = 1. Accumulated in extended precision since the terms reach
 * d0^d0 / d0! before cancelling down to at most 1.
 */
inline double limit_at_infinity_type1(double y, const TypeIScheme& scheme) {
  scheme.validate();
  if (!(y > 0.0)) throw std::domain_error("limit: y must be positive");
  const int n = scheme.n;
  const int d0 = scheme.d0;
  const double T = scheme.T;
  if (y <= (n - d0) * T / d0) return 0.0;
  if (y > n * T / d0) return 1.0;
  long double acc = 0.0L;
  for (int nu = 0; nu < d0; ++nu) {
    const long double a = (static_cast<long double>(d0) * y - (n - d0 + nu) * static_cast<long double>(T)) / T;
    if (a <= 0.0L) continue;
    long double term = 1.0L;
    for (int k = 0; k < d0; ++k) term *= a;
    for (int k = 2; k <= nu; ++k) term /= k;
    for (int k = 2; k <= d0 - nu; ++k) term /= k;
    acc += nu % 2 == 0 ? term : -term;
  }
  return std::clamp(static_cast<double>(acc), 0.0, 1.0);
}

/// theta -> infinity limit of the hybrid conditional CDF (only shape-1 terms
/// survive): u at y = (n-1+u)T when r > 1, and u at y = n u T when r = 1.
inline double limit_at_infinity_hybrid(double y, const HybridTypeIScheme& scheme) {
  return hybrid_mixture(scheme).limit_at_infinity(y);
}

/// theta -> 0 limit, identical for both censoring models.
inline double limit_at_zero(double y) {
  if (!(y > 0.0)) throw std::domain_error("limit: y must be positive");
  return 1.0;
}

} // namespace pivotci

#endif // PIVOTCI_CONDITIONAL_CDF_HPP_
