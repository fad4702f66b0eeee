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

#ifndef UNITSEL_LEARNER_H_
#define UNITSEL_LEARNER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitsel/bounds.h"
#include "unitsel/informer.h"
#include "unitsel/model.h"

namespace unitsel {

struct Hyperparams {
  int hidden_width = 128;
  int epochs = 600;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  // 0 means full batch.
  int batch_size = 0;

  void Validate() const;
};

// input -> tanh(hidden) -> tanh(hidden) -> linear scalar. Weight matrices are
// row-major with one row per output unit.
struct Mlp {
  int input_dim = 0;
  int hidden_width = 0;
  std::vector<double> w1;  // hidden x input
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden x hidden
  std::vector<double> b2;  // hidden
  std::vector<double> w3;  // hidden
  double b3 = 0.0;
  Hyperparams hp;
  std::vector<double> loss_history;

  std::size_t ParameterCount() const;
  // Parameters in the order w1, b1, w2, b2, w3, b3.
  std::vector<double> Flatten() const;
  void Unflatten(std::span<const double> params);
  // Throws ValidationError on inconsistent dims or non-finite weights.
  void Validate() const;
};

// Features are 0/1 rows of equal width.
using FeatureMatrix = std::vector<std::vector<Bit>>;

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
Mlp InitMlp(int input_dim, const Hyperparams& hp);

double MeanSquaredError(const Mlp& model, const FeatureMatrix& features,
                        std::span<const double> targets);

// Gradient of MeanSquaredError in Flatten() order.
std::vector<double> MseGradient(const Mlp& model, const FeatureMatrix& features,
                                std::span<const double> targets);

// Gradient descent on mean-squared error. Deterministic given the inputs
// and hp (including hp.seed). Throws ValidationError on empty data, ragged
// rows or non-finite targets.
Mlp Train(const FeatureMatrix& features, std::span<const double> targets,
          const Hyperparams& hp);

double PredictRaw(const Mlp& model, std::span<const Bit> features);

// Forward pass clamped to BenefitRange(v).
double Predict(const Mlp& model, const CellKey& cell, const BenefitVector& v);

struct PredictionRow {
  std::uint32_t cell_id = 0;
  double pred_lower = 0.0;
  double pred_upper = 0.0;
  bool repaired = false;

  friend bool operator==(const PredictionRow&, const PredictionRow&) = default;
};

// Crossed pairs are replaced by their midpoint.
void RepairCrossing(PredictionRow& row);

// One row per cell id in ascending order.
std::vector<PredictionRow> PredictAll(const Mlp& lower, const Mlp& upper,
                                      int n_observed, const BenefitVector& v);

// Distinct cell ids drawn with CounterRng(seed), in draw order.
std::vector<std::uint32_t> SampleCellIds(std::uint64_t n_cells,
                                         std::size_t sample_n,
                                         std::uint64_t seed);

struct Metrics {
  double mae_lower = 0.0;
  double mae_upper = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultEvalSample = 200;

Metrics Evaluate(std::span<const PredictionRow> preds,
                 std::span<const InformerRecord> truth,
                 std::size_t sample_n = kDefaultEvalSample,
                 std::uint64_t seed = 0);

std::string MlpToJson(const Mlp& model);
Mlp MlpFromJson(std::string_view text);

}  // namespace unitsel

#endif  // UNITSEL_LEARNER_H_
