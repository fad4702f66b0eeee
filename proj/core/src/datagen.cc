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

#include "unitsel/datagen.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <thread>

#include "unitsel/errors.h"

namespace unitsel {

const char* RegimeName(Regime regime) {
  return regime == Regime::kExperimental ? "experimental" : "observational";
}

Regime ParseRegime(std::string_view name) {
  if (name == "experimental" || name == "exp") return Regime::kExperimental;
  if (name == "observational" || name == "obs") return Regime::kObservational;
  throw ValidationError("unknown regime '" + std::string(name) + "'");
}

std::vector<Bit> Sample::ObservedBits(int n_observed) const {
  std::vector<Bit> bits(static_cast<std::size_t>(n_observed));
  for (int i = 0; i < n_observed; ++i) bits[i] = (z >> i) & 1u;
  return bits;
}

ExogenousAssignment DrawExogenous(CounterRng& rng, const ScmConfig& config) {
  ExogenousAssignment a;
  a.z.resize(static_cast<std::size_t>(config.n_total()));
  for (int i = 0; i < config.n_total(); ++i) a.z[i] = rng.Bernoulli(config.bern_z[i]);
  a.u_x = rng.Bernoulli(config.bern_ux);
  a.u_y = rng.Bernoulli(config.bern_uy);
  return a;
}

Sample DrawSample(CounterRng& rng, const ScmConfig& config, Regime regime) {
  // Same draw order as DrawExogenous without the allocation.
  const int n = config.n_total();
  double m_x = 0.0;
  double m_y = 0.0;
  std::uint32_t observed = 0;
  for (int i = 0; i < n; ++i) {
    if (rng.Bernoulli(config.bern_z[i])) {
      m_x += config.weights_x[i];
      m_y += config.weights_y[i];
      if (i < config.n_observed) observed |= std::uint32_t{1} << i;
    }
  }
  const Bit u_x = rng.Bernoulli(config.bern_ux);
  const Bit u_y = rng.Bernoulli(config.bern_uy);
  Sample s;
  s.z = observed;
  s.x = regime == Regime::kExperimental
            ? rng.Bernoulli(config.experiment_assign_prob)
            : EvalX(m_x, u_x);
  s.y = EvalY(s.x, m_y, u_y, config.constant_c);
  return s;
}

std::vector<Sample> Generate(Regime regime, std::uint64_t n,
                             std::uint64_t seed, const ScmConfig& config,
                             int threads) {
  config.Validate();
  std::vector<Sample> out(n);
  const std::uint64_t n_streams = (n + kSamplesPerStream - 1) / kSamplesPerStream;
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  const auto n_workers = static_cast<std::uint64_t>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads),
                              std::max<std::uint64_t>(n_streams, 1)));

  auto run_streams = [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t k = first; k < last; ++k) {
      CounterRng rng(seed, k);
      const std::uint64_t begin = k * kSamplesPerStream;
      const std::uint64_t end = std::min(n, begin + kSamplesPerStream);
      for (std::uint64_t i = begin; i < end; ++i) {
        out[i] = DrawSample(rng, config, regime);
      }
    }
  };

  if (n_workers <= 1) {
    run_streams(0, n_streams);
    return out;
  }
  std::vector<std::jthread> workers;
  const std::uint64_t per = (n_streams + n_workers - 1) / n_workers;
  for (std::uint64_t w = 0; w < n_workers; ++w) {
    const std::uint64_t first = w * per;
    const std::uint64_t last = std::min(n_streams, first + per);
    if (first >= last) break;
    workers.emplace_back(run_streams, first, last);
  }
  return out;
}

std::uint32_t PackSample(const Sample& s) {
  return s.z | (std::uint32_t{s.x} << 30) | (std::uint32_t{s.y} << 31);
}

Sample UnpackSample(std::uint32_t word) {
  Sample s;
  s.z = word & ((std::uint32_t{1} << 30) - 1);
  s.x = (word >> 30) & 1u;
  s.y = (word >> 31) & 1u;
  return s;
}

std::string Fingerprint(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace unitsel
