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

#ifndef UNITSEL_DATAGEN_H_
#define UNITSEL_DATAGEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unitsel/model.h"
#include "unitsel/rng.h"

namespace unitsel {

enum class Regime { kExperimental, kObservational };

const char* RegimeName(Regime regime);
Regime ParseRegime(std::string_view name);

// One row of a dataset: the observed characteristics packed with z_1 in the
// least-significant bit (equal to the cell id), treatment and outcome.
struct Sample {
  std::uint32_t z = 0;
  Bit x = 0;
  Bit y = 0;

  std::vector<Bit> ObservedBits(int n_observed) const;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct DatasetMeta {
  Regime kind = Regime::kExperimental;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string config_fingerprint;
  int n_observed = 0;
  std::string format = "csv";
};

// Samples [k * kSamplesPerStream, (k + 1) * kSamplesPerStream) are drawn from
// CounterRng(seed, k), so output does not depend on the thread count.
inline constexpr std::uint64_t kSamplesPerStream = std::uint64_t{1} << 16;

// Consumes exactly n_total + 2 draws: z_1..z_n, then u_x, then u_y.
ExogenousAssignment DrawExogenous(CounterRng& rng, const ScmConfig& config);

// One sample. The experimental regime consumes one extra draw (after the
// exogenous ones) for the randomized treatment.
Sample DrawSample(CounterRng& rng, const ScmConfig& config, Regime regime);

// threads <= 0 picks std::thread::hardware_concurrency().
std::vector<Sample> Generate(Regime regime, std::uint64_t n,
                             std::uint64_t seed, const ScmConfig& config,
                             int threads = 0);

inline std::vector<Sample> GenerateExperimental(std::uint64_t n,
                                                std::uint64_t seed,
                                                const ScmConfig& config,
                                                int threads = 0) {
  return Generate(Regime::kExperimental, n, seed, config, threads);
}

inline std::vector<Sample> GenerateObservational(std::uint64_t n,
                                                 std::uint64_t seed,
                                                 const ScmConfig& config,
                                                 int threads = 0) {
  return Generate(Regime::kObservational, n, seed, config, threads);
}

// Packed form: observed bits in 0..n_observed-1, x at bit 30, y at bit 31.
std::uint32_t PackSample(const Sample& s);
Sample UnpackSample(std::uint32_t word);

// "fnv1a64:<16 hex digits>" over the exact bytes.
std::string Fingerprint(std::string_view bytes);

}  // namespace unitsel

#endif  // UNITSEL_DATAGEN_H_
