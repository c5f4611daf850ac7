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

#ifndef PIVOTCI_SUMMATION_HPP_
#define PIVOTCI_SUMMATION_HPP_

#include <algorithm>
#include <cmath>
#include <span>

namespace pivotci {

/// Neumaier's variant of Kahan summation. Order-sensitive, so callers that
/// need reproducible results must feed terms in a fixed order.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
    magnitude_ += std::abs(x);
  }

  double value() const noexcept { return sum_ + compensation_; }

  /// Sum of absolute values of everything added so far.
  double magnitude() const noexcept { return magnitude_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double magnitude_ = 0.0;
};

struct SignedSum {
  double value;
  /// Sum of |terms|. The ratio magnitude / |value| measures cancellation.
  double magnitude;

  double cancellation() const noexcept {
    if (magnitude == 0.0) return 1.0;
    return value == 0.0 ? HUGE_VAL : magnitude / std::abs(value);
  }
};

/// Sorts the terms by ascending magnitude (in place) and accumulates them
/// with compensation.
inline SignedSum sum_ascending_magnitude(std::span<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  CompensatedSum acc;
  for (double t : terms) acc.add(t);
  return {acc.value(), acc.magnitude()};
}

} // namespace pivotci

#endif // PIVOTCI_SUMMATION_HPP_
