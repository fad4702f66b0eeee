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

#ifndef UNITSEL_MODEL_H_
#define UNITSEL_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace unitsel {

using Bit = std::uint8_t;

// Largest observed-characteristic count. Packed sample words keep the
// observed bits in positions 0..29 and x, y in bits 30 and 31.
inline constexpr int kMaxObserved = 30;

// Parameterization of the two-mechanism structural model:
//   Z_i = U_{Z_i}
//   X   = 1 iff M_X + U_X > 0.5
//   Y   = 1 iff C*X + M_Y + U_Y lies in (0,1) or (1,2)
// where M_X, M_Y are dot products of Z with the weight columns. The first
// n_observed characteristics are visible in the data; the rest are not.
struct ScmConfig {
  int n_observed = 0;
  int n_unobserved = 0;
  std::vector<double> weights_x;
  std::vector<double> weights_y;
  double constant_c = 0.0;
  std::vector<double> bern_z;
  double bern_ux = 0.0;
  double bern_uy = 0.0;
  double experiment_assign_prob = 0.5;

  int n_total() const { return n_observed + n_unobserved; }

  // Throws ConfigError when an invariant is broken.
  void Validate() const;
};

// The shipped model: 15 observed and 5 unobserved characteristics.
ScmConfig DefaultConfig();

// Draws a model the way the shipped one was produced: weights and C uniform
// on [-1, 1], every Bernoulli parameter uniform on [0, 1].
ScmConfig RandomConfig(int n_observed, int n_unobserved, std::uint64_t seed);

ScmConfig ConfigFromJson(std::string_view text);
std::string ConfigToJson(const ScmConfig& config);
ScmConfig LoadConfig(const std::string& path);

// All characteristics z_1..z_n of one individual.
struct FullProfile {
  std::vector<Bit> z;
};

// One assignment of the observed characteristics. The integer id packs z_1
// into the least-significant bit.
class CellKey {
 public:
  CellKey(std::uint32_t id, int n_observed);
  static CellKey FromBits(std::span<const Bit> bits);

  std::uint32_t id() const { return id_; }
  int n_observed() const { return n_observed_; }
  Bit bit(int i) const { return static_cast<Bit>((id_ >> i) & 1u); }
  std::vector<Bit> bits() const;

  friend bool operator==(const CellKey&, const CellKey&) = default;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;

 private:
  std::uint32_t id_;
  int n_observed_;
};

struct ExogenousAssignment {
  std::vector<Bit> z;
  Bit u_x = 0;
  Bit u_y = 0;
};

enum class ResponseType { kComplier, kAlwaysTaker, kNeverTaker, kDefier };

const char* ResponseTypeName(ResponseType type);

// Outcomes of one unit under control (x = 0) and under treatment (x = 1).
struct CounterfactualPair {
  Bit y_control = 0;
  Bit y_treated = 0;

  friend bool operator==(const CounterfactualPair&,
                         const CounterfactualPair&) = default;
};

double MValue(std::span<const Bit> z, std::span<const double> weights);

Bit EvalX(double m_x, Bit u_x);
Bit EvalY(Bit x, double m_y, Bit u_y, double c);

CounterfactualPair CounterfactualPairFor(const FullProfile& profile, Bit u_y,
                                         const ScmConfig& config);
// Same as above for a precomputed M_Y.
CounterfactualPair CounterfactualPairForM(double m_y, Bit u_y, double c);

ResponseType ResponseTypeOf(CounterfactualPair pair);

// Full profile made of a cell's observed bits followed by the unobserved
// completion. Completion index i assigns its most significant bit to
// z_{n_observed+1} and its least significant bit to z_n.
FullProfile ComposeProfile(const CellKey& cell, std::uint32_t completion,
                           int n_unobserved);

}  // namespace unitsel

#endif  // UNITSEL_MODEL_H_
