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

#ifndef PIVOTCI_RANDOM_HPP_
#define PIVOTCI_RANDOM_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace pivotci {

/*
 * Counter-based uniform generator (Philox4x32-10, Salmon et al. 2011).
 *
 * A (seed, stream) pair selects an independent sequence; the position inside
 * the sequence is a plain counter. Replication i of a Monte Carlo study uses
 * stream i, so results do not depend on how replications are scheduled.
 */
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t seed() const noexcept {
    return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
  }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t position() const noexcept { return counter_ * 2 + (have_spare_ ? 1 : 0); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return to_unit(spare_);
    }
    const auto block = philox(counter_++);
    const std::uint64_t a = (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
    spare_ = (static_cast<std::uint64_t>(block[2]) << 32) | block[3];
    have_spare_ = true;
    return to_unit(a);
  }

  /// Exponential with the given mean, by inversion.
  double exponential(double mean) noexcept { return -mean * std::log(1.0 - uniform()); }

  /// Raw Philox block for counter `index` of this stream.
  std::array<std::uint32_t, 4> block(std::uint64_t index) const noexcept { return philox(index); }

private:
  static double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  std::array<std::uint32_t, 4> philox(std::uint64_t index) const noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(index),
                                     static_cast<std::uint32_t>(index >> 32),
                                     static_cast<std::uint32_t>(stream_),
                                     static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

} // namespace pivotci

#endif // PIVOTCI_RANDOM_HPP_
