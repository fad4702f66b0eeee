/*
 * Copyright 2026 The Unitsel Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UNITSEL_RNG_H_
#define UNITSEL_RNG_H_

#include <cstdint>

namespace unitsel {

__extension__ typedef unsigned __int128 Uint128;

// Counter-based generator: the i-th output of a stream is
// SplitMix64Finalize(key + i * kGolden). A stream is identified by
// (seed, stream index) and its key is SplitMix64Finalize(seed ^ stream), so
// any block of work can be regenerated without replaying earlier blocks.
//
// Every consumer in the library draws through this class, never through
// <random> distributions, whose outputs differ between standard libraries.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(Finalize(seed ^ stream)) {}

  std::uint64_t Next() { return Finalize(key_ + (++counter_) * kGolden); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // 1 with probability p. p = 0 never fires, p = 1 always fires.
  std::uint8_t Bernoulli(double p) { return Uniform() < p ? 1 : 0; }

  // Uniform on [lo, hi).
  double UniformRange(double lo, double hi) {
    return lo + (hi - lo) * Uniform();
  }

  // Unbiased integer in [0, bound), bound > 0 (Lemire's multiply-shift with
  // rejection).
  std::uint64_t Below(std::uint64_t bound) {
    Uint128 m = static_cast<Uint128>(Next()) * static_cast<Uint128>(bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<Uint128>(Next()) * static_cast<Uint128>(bound);
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t draws() const { return counter_; }

  static constexpr std::uint64_t Finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Seeded Fisher-Yates shuffle, portable across standard libraries.
template <typename It>
void Shuffle(It first, It last, CounterRng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = rng.Below(i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace unitsel

#endif  // UNITSEL_RNG_H_
