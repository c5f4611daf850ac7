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

#ifndef PIVOTCI_PIVOT_HPP_
#define PIVOTCI_PIVOT_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>

namespace pivotci {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval of admissible parameter values. Infinite endpoints are open.
struct ParameterSpace {
  double lower = -kInf;
  double upper = kInf;
  bool lower_closed = false;
  bool upper_closed = false;

  static ParameterSpace real_line() { return {}; }
  static ParameterSpace positive() { return {0.0, kInf, false, false}; }
  static ParameterSpace closed(double lo, double hi) { return {lo, hi, true, true}; }

  void validate() const {
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper))
      throw std::invalid_argument("parameter space needs lower < upper");
    if ((std::isinf(lower) && lower_closed) || (std::isinf(upper) && upper_closed))
      throw std::invalid_argument("infinite parameter-space endpoints must be open");
  }

  bool contains(double theta) const noexcept {
    const bool above = lower_closed ? theta >= lower : theta > lower;
    const bool below = upper_closed ? theta <= upper : theta < upper;
    return above && below;
  }

  bool interior(double theta) const noexcept { return theta > lower && theta < upper; }
};

enum class Monotonicity {
  /// F(y; theta) nonincreasing in theta for every y.
  stochastically_increasing,
  /// F(y; theta) nondecreasing in theta; handled by flipping theta -> -theta.
  stochastically_decreasing,
};

/*
 * A one-parameter family of distributions for a statistic Y, in the form
 * needed to pivot its CDF.
 *
 * limit_low / limit_high are the limits of F(y; theta) as theta approaches the
 * lower / upper end of the parameter space. Existence of an interior solution
 * of F(y; theta) = alpha is decided from them alone. Discrete families also
 * supply the survival function P(Y >= y) and its two limits.
 */
struct PivotedFamily {
  using Cdf = std::function<double(double y, double theta)>;
  using Limit = std::function<double(double y)>;

  Cdf cdf;
  Limit limit_low;
  Limit limit_high;
  Cdf survival;
  Limit survival_limit_low;
  Limit survival_limit_high;
  /// Optional starting point for bracketing, e.g. the estimate itself.
  Limit start;
  ParameterSpace space;
  Monotonicity direction = Monotonicity::stochastically_increasing;

  bool has_survival() const noexcept {
    return static_cast<bool>(survival) && static_cast<bool>(survival_limit_low) &&
           static_cast<bool>(survival_limit_high);
  }
};

enum class Side { low, high };

/// F(y; theta) = alpha has no interior solution. `high` means the limit as
/// theta approaches the upper end is already >= alpha, `low` that the limit at
/// the lower end is <= alpha.
struct NoSolution {
  Side side;
  friend bool operator==(NoSolution, NoSolution) = default;
};

using CdfSolution = std::variant<double, NoSolution>;

/// The family broke its monotonicity contract (or produced NaN) while a root
/// was being bracketed.
class BracketFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  double rel_tol = 1e-10;
  int max_iterations = 200;
  int max_expansions = 64;
};

enum class Clamp { none, at_lower, at_upper };

struct ConfidenceResult {
  double lower;
  double upper;
  Clamp lower_clamp = Clamp::none;
  Clamp upper_clamp = Clamp::none;
  double alpha1;
  double alpha2;

  bool lower_clamped() const noexcept { return lower_clamp != Clamp::none; }
  bool upper_clamped() const noexcept { return upper_clamp != Clamp::none; }
  /// Both endpoints sit on the same boundary of the parameter space.
  bool degenerate() const noexcept { return lower_clamp != Clamp::none && lower_clamp == upper_clamp; }
  bool upper_infinite() const noexcept { return upper == kInf; }
  bool lower_infinite() const noexcept { return lower == -kInf; }
  /// Degenerate at an infinite boundary: no parameter value is covered.
  bool empty() const noexcept { return degenerate() && std::isinf(lower); }
  bool proper() const noexcept { return std::isfinite(lower) && std::isfinite(upper) && !degenerate(); }
  bool contains(double theta) const noexcept { return lower <= theta && theta <= upper; }
  double width() const noexcept { return upper - lower; }
};

namespace detail {

/// Monotone bijection between the interior of a parameter space and the real
/// line: log for half-lines, logit for bounded intervals, identity otherwise.
class ScaleMap {
public:
  explicit ScaleMap(const ParameterSpace& space) : lo_(space.lower), hi_(space.upper) {
    const bool lo_finite = std::isfinite(lo_);
    const bool hi_finite = std::isfinite(hi_);
    if (lo_finite && hi_finite) kind_ = Kind::logit;
    else if (lo_finite) kind_ = Kind::log_above;
    else if (hi_finite) kind_ = Kind::log_below;
    else kind_ = Kind::identity;
  }

  double to_theta(double s) const {
    switch (kind_) {
      case Kind::identity: return s;
      case Kind::log_above: return lo_ + std::exp(s);
      case Kind::log_below: return hi_ - std::exp(-s);
      case Kind::logit: {
        const double w = hi_ - lo_;
        return s >= 0.0 ? hi_ - w / (1.0 + std::exp(s)) : lo_ + w / (1.0 + std::exp(-s));
      }
    }
    return s;
  }

  double to_scale(double theta) const {
    switch (kind_) {
      case Kind::identity: return theta;
      case Kind::log_above: return std::log(theta - lo_);
      case Kind::log_below: return -std::log(hi_ - theta);
      case Kind::logit: return std::log(theta - lo_) - std::log(hi_ - theta);
    }
    return theta;
  }

  /// Initial bracket half-width on the transformed scale.
  double initial_width(double s0) const {
    switch (kind_) {
      case Kind::identity: return std::max(1.0, 1e-3 * std::abs(s0));
      case Kind::log_above:
      case Kind::log_below: return std::log(1e6);
      case Kind::logit: return 4.0;
    }
    return 1.0;
  }

  bool is_identity() const noexcept { return kind_ == Kind::identity; }

private:
  enum class Kind { identity, log_above, log_below, logit };
  double lo_;
  double hi_;
  Kind kind_;
};

inline double default_start(const ParameterSpace& space, double y) {
  if (std::isfinite(y) && space.interior(y)) return y;
  const bool lo_finite = std::isfinite(space.lower);
  const bool hi_finite = std::isfinite(space.upper);
  if (lo_finite && hi_finite) return 0.5 * (space.lower + space.upper);
  if (lo_finite) return space.lower + 1.0;
  if (hi_finite) return space.upper - 1.0;
  return 0.0;
}

/*
 * Bracketed bisection for inf{theta : g(theta) <= target}, g nonincreasing.
 * Works on the transformed scale of `space`; the bracket is widened by
 * doubling until g(lo) > target >= g(hi). Callers guarantee that both sides
 * exist from the analytic limits, so a failed expansion is a contract breach.
 * Returns the left bracket end after convergence.
 */
template <typename Fn>
double bisect_nonincreasing(const Fn& g, double target, const ParameterSpace& space, double start,
                            const SolverOptions& opts) {
  const ScaleMap map(space);
  if (!space.interior(start)) start = default_start(space, start);
  const double s0 = map.to_scale(start);
  const double w0 = map.initial_width(s0);

  auto valid = [&](double s) {
    const double theta = map.to_theta(s);
    return std::isfinite(theta) && space.interior(theta);
  };
  auto eval = [&](double s) {
    const double v = g(map.to_theta(s));
    if (std::isnan(v))
      throw BracketFailure("family returned NaN at theta = " + std::to_string(map.to_theta(s)));
    return v;
  };

  // Walk away from s0 with doubling steps until the sign of g - target flips.
  // Steps that would leave the representable interior are halved instead.
  auto search = [&](double base, double direction) {
    double w = w0;
    int expansions = 0;
    for (int step = 0; step < 4096; ++step) {
      const double cand = base + direction * w;
      if (cand == base) break;
      if (!valid(cand)) {
        w *= 0.5;
        continue;
      }
      const bool above = eval(cand) > target;
      if (above == (direction < 0.0)) return std::pair{cand, base};
      base = cand;
      w *= 2.0;
      if (++expansions > opts.max_expansions) break;
    }
    throw BracketFailure(direction > 0.0 ? "could not bracket root from above"
                                         : "could not bracket root from below");
  };

  double s_lo;
  double s_hi;
  if (eval(s0) > target) {
    std::tie(s_hi, s_lo) = search(s0, +1.0);
  } else {
    std::tie(s_lo, s_hi) = search(s0, -1.0);
  }

  for (int it = 0; it < opts.max_iterations; ++it) {
    const double t_lo = map.to_theta(s_lo);
    const double t_hi = map.to_theta(s_hi);
    const double scale = std::max({std::abs(t_lo), std::abs(t_hi), std::numeric_limits<double>::min()});
    if (t_hi - t_lo <= opts.rel_tol * scale) break;
    const double mid = 0.5 * (s_lo + s_hi);
    if (mid <= s_lo || mid >= s_hi) break;
    if (eval(mid) > target) s_lo = mid;
    else s_hi = mid;
  }
  return map.to_theta(s_lo);
}

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

inline double start_for(const PivotedFamily& family, double y) {
  return family.start ? family.start(y) : default_start(family.space, y);
}

/// Reparametrizes theta' = -theta, turning a stochastically decreasing family
/// into an increasing one.
inline PivotedFamily flipped(const PivotedFamily& f) {
  PivotedFamily g;
  g.space = {-f.space.upper, -f.space.lower, f.space.upper_closed, f.space.lower_closed};
  g.cdf = [cdf = f.cdf](double y, double t) { return cdf(y, -t); };
  g.limit_low = f.limit_high;
  g.limit_high = f.limit_low;
  if (f.survival) g.survival = [s = f.survival](double y, double t) { return s(y, -t); };
  g.survival_limit_low = f.survival_limit_high;
  g.survival_limit_high = f.survival_limit_low;
  if (f.start) g.start = [st = f.start](double y) { return -st(y); };
  g.direction = Monotonicity::stochastically_increasing;
  return g;
}

inline Clamp flip(Clamp c) {
  return c == Clamp::at_lower ? Clamp::at_upper : c == Clamp::at_upper ? Clamp::at_lower : Clamp::none;
}

inline ConfidenceResult unflip(const ConfidenceResult& r) {
  return {-r.upper, -r.lower, flip(r.upper_clamp), flip(r.lower_clamp), r.alpha1, r.alpha2};
}

struct Endpoint {
  double theta;
  Clamp clamp;
};

inline Endpoint upper_endpoint(const PivotedFamily& family, double alpha, double y, const SolverOptions& opts);
inline Endpoint lower_endpoint_discrete(const PivotedFamily& family, double alpha, double y,
                                        const SolverOptions& opts);

} // namespace detail

/*
 * Solves F(y; theta) = alpha for theta in the interior of the parameter space.
 *
 * An interior solution exists iff limit_high(y) < alpha < limit_low(y); the
 * decision is made from the limits, never from a failed bracket search. When
 * F(y; .) is flat at level alpha the infimum of the solution set is returned.
 */
inline CdfSolution solve_cdf_equation(const PivotedFamily& family, double y, double alpha,
                                      SolverOptions opts = {}) {
  detail::check_alpha(alpha);
  family.space.validate();
  if (family.direction == Monotonicity::stochastically_decreasing) {
    const auto flipped = solve_cdf_equation(detail::flipped(family), y, alpha, opts);
    if (const auto* t = std::get_if<double>(&flipped)) return -*t;
    const Side side = std::get<NoSolution>(flipped).side;
    return NoSolution{side == Side::low ? Side::high : Side::low};
  }
  if (family.limit_low(y) <= alpha) return NoSolution{Side::low};
  if (family.limit_high(y) >= alpha) return NoSolution{Side::high};
  const auto g = [&](double theta) { return family.cdf(y, theta); };
  return detail::bisect_nonincreasing(g, alpha, family.space, detail::start_for(family, y), opts);
}

namespace detail {

inline Endpoint upper_endpoint(const PivotedFamily& family, double alpha, double y,
                               const SolverOptions& opts) {
  const CdfSolution sol = solve_cdf_equation(family, y, alpha, opts);
  if (const auto* t = std::get_if<double>(&sol)) return {*t, Clamp::none};
  return std::get<NoSolution>(sol).side == Side::low ? Endpoint{family.space.lower, Clamp::at_lower}
                                                     : Endpoint{family.space.upper, Clamp::at_upper};
}

inline Endpoint lower_endpoint_discrete(const PivotedFamily& family, double alpha, double y,
                                        const SolverOptions& opts) {
  if (!family.has_survival())
    throw std::invalid_argument("discrete pivoting needs the survival function and its limits");
  if (family.survival_limit_low(y) >= alpha) return {family.space.lower, Clamp::at_lower};
  if (family.survival_limit_high(y) <= alpha) return {family.space.upper, Clamp::at_upper};
  // P(Y >= y) is nondecreasing in theta; bisect its negation.
  const auto g = [&](double theta) { return -family.survival(y, theta); };
  return {bisect_nonincreasing(g, -alpha, family.space, start_for(family, y), opts), Clamp::none};
}

} // namespace detail

/// Extended pivot: the interior root of F(y; theta) = alpha when one exists,
/// otherwise the boundary of the parameter space selected by the limits.
inline double theta_star(const PivotedFamily& family, double alpha, double y, SolverOptions opts = {}) {
  return detail::upper_endpoint(family, alpha, y, opts).theta;
}

/// Discrete counterpart built on the survival function P(Y >= y):
/// lower boundary if P(Y >= y) >= alpha at the lower end, upper boundary if
/// it is <= alpha at the upper end, otherwise the root of P(Y >= y) = alpha.
inline double theta_lower_star(const PivotedFamily& family, double alpha, double y,
                               SolverOptions opts = {}) {
  detail::check_alpha(alpha);
  family.space.validate();
  if (family.direction == Monotonicity::stochastically_decreasing)
    return -theta_lower_star(detail::flipped(family), alpha, y, opts);
  return detail::lower_endpoint_discrete(family, alpha, y, opts).theta;
}

namespace detail {

inline void check_split(double alpha1, double alpha2) {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !(alpha1 + alpha2 < 1.0))
    throw std::invalid_argument("need alpha1, alpha2 > 0 with alpha1 + alpha2 < 1");
}

} // namespace detail

/// Exact 100(1 - alpha1 - alpha2)% interval [theta*(1 - alpha1, y), theta*(alpha2, y)]
/// for a continuous statistic.
inline ConfidenceResult interval_continuous(const PivotedFamily& family, double alpha1, double alpha2,
                                            double y, SolverOptions opts = {}) {
  detail::check_split(alpha1, alpha2);
  family.space.validate();
  if (family.direction == Monotonicity::stochastically_decreasing)
    return detail::unflip(interval_continuous(detail::flipped(family), alpha1, alpha2, y, opts));
  const auto lo = detail::upper_endpoint(family, 1.0 - alpha1, y, opts);
  const auto hi = detail::upper_endpoint(family, alpha2, y, opts);
  return {lo.theta, hi.theta, lo.clamp, hi.clamp, alpha1, alpha2};
}

/// Interval for a discrete statistic, [theta_*(alpha1, y), theta*(alpha2, y)].
/// Coverage is at least 1 - alpha1 - alpha2.
inline ConfidenceResult interval_discrete(const PivotedFamily& family, double alpha1, double alpha2,
                                          double y, SolverOptions opts = {}) {
  detail::check_split(alpha1, alpha2);
  family.space.validate();
  if (family.direction == Monotonicity::stochastically_decreasing)
    return detail::unflip(interval_discrete(detail::flipped(family), alpha1, alpha2, y, opts));
  const auto lo = detail::lower_endpoint_discrete(family, alpha1, y, opts);
  const auto hi = detail::upper_endpoint(family, alpha2, y, opts);
  return {lo.theta, hi.theta, lo.clamp, hi.clamp, alpha1, alpha2};
}

/*
 * Narrows the parameter space to [lo, hi]. New finite endpoints are closed and
 * their limits become plain CDF (survival) evaluations there; an endpoint that
 * coincides with the original one keeps its original openness and limit.
 */
inline PivotedFamily restricted_family(const PivotedFamily& family, double lo, double hi) {
  family.space.validate();
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi))
    throw std::invalid_argument("restriction needs lo < hi");
  if (lo < family.space.lower || hi > family.space.upper)
    throw std::invalid_argument("restriction must lie inside the original parameter space");

  PivotedFamily out = family;
  if (lo > family.space.lower) {
    out.space.lower = lo;
    out.space.lower_closed = true;
    out.limit_low = [cdf = family.cdf, lo](double y) { return cdf(y, lo); };
    if (family.survival)
      out.survival_limit_low = [s = family.survival, lo](double y) { return s(y, lo); };
  }
  if (hi < family.space.upper) {
    out.space.upper = hi;
    out.space.upper_closed = true;
    out.limit_high = [cdf = family.cdf, hi](double y) { return cdf(y, hi); };
    if (family.survival)
      out.survival_limit_high = [s = family.survival, hi](double y) { return s(y, hi); };
  }
  out.space.validate();
  return out;
}

} // namespace pivotci

#endif // PIVOTCI_PIVOT_HPP_
