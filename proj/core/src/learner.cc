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

#include "unitsel/learner.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "unitsel/errors.h"
#include "unitsel/rng.h"

namespace unitsel {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

RowMatrix ToMatrix(const FeatureMatrix& features, int width) {
  RowMatrix x(static_cast<Eigen::Index>(features.size()), width);
  for (std::size_t r = 0; r < features.size(); ++r) {
    for (int c = 0; c < width; ++c) {
      x(static_cast<Eigen::Index>(r), c) = features[r][c];
    }
  }
  return x;
}

void CheckData(const FeatureMatrix& features, std::span<const double> targets,
               int width) {
  if (features.empty()) throw ValidationError("training data is empty");
  if (features.size() != targets.size()) {
    throw ValidationError("feature and target counts differ");
  }
  for (const auto& row : features) {
    if (static_cast<int>(row.size()) != width) {
      throw ValidationError("feature rows must share one width");
    }
    for (Bit b : row) {
      if (b > 1) throw ValidationError("features must be 0/1");
    }
  }
  for (double t : targets) {
    if (!std::isfinite(t)) throw ValidationError("non-finite target");
  }
}

struct Activations {
  RowMatrix h1;
  RowMatrix h2;
  Eigen::VectorXd out;
};

Activations Forward(const Mlp& m, const RowMatrix& x) {
  ConstMatrixMap w1(m.w1.data(), m.hidden_width, m.input_dim);
  ConstVectorMap b1(m.b1.data(), m.hidden_width);
  ConstMatrixMap w2(m.w2.data(), m.hidden_width, m.hidden_width);
  ConstVectorMap b2(m.b2.data(), m.hidden_width);
  ConstVectorMap w3(m.w3.data(), m.hidden_width);
  Activations a;
  a.h1 = ((x * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
  a.h2 = ((a.h1 * w2.transpose()).rowwise() + b2.transpose()).array().tanh();
  a.out = (a.h2 * w3).array() + m.b3;
  return a;
}

// Gradient of mean((out - t)^2) over the rows of x, written in Flatten()
// order into `grad`.
void Backward(const Mlp& m, const RowMatrix& x, const Eigen::VectorXd& t,
              std::vector<double>& grad) {
  const Activations a = Forward(m, x);
  const auto n = static_cast<double>(x.rows());
  const int h = m.hidden_width;
  const int in = m.input_dim;
  ConstMatrixMap w2(m.w2.data(), h, h);
  ConstVectorMap w3(m.w3.data(), h);

  const Eigen::VectorXd d_out = 2.0 * (a.out - t) / n;
  const RowMatrix d_h2 =
      ((d_out * w3.transpose()).array() * (1.0 - a.h2.array().square()))
          .matrix();
  const RowMatrix d_h1 =
      ((d_h2 * w2).array() * (1.0 - a.h1.array().square())).matrix();

  grad.resize(m.ParameterCount());
  double* p = grad.data();
  MatrixMap(p, h, in) = d_h1.transpose() * x;
  p += static_cast<std::ptrdiff_t>(h) * in;
  VectorMap(p, h) = d_h1.colwise().sum().transpose();
  p += h;
  MatrixMap(p, h, h) = d_h2.transpose() * a.h1;
  p += static_cast<std::ptrdiff_t>(h) * h;
  VectorMap(p, h) = d_h2.colwise().sum().transpose();
  p += h;
  VectorMap(p, h) = a.h2.transpose() * d_out;
  p += h;
  *p = d_out.sum();
}

// params -= lr * grad, with grad in Flatten() order.
void ApplyStep(Mlp& m, const std::vector<double>& grad, double lr) {
  const double* g = grad.data();
  auto step = [&g, lr](std::vector<double>& dst) {
    for (double& v : dst) v -= lr * *g++;
  };
  step(m.w1);
  step(m.b1);
  step(m.w2);
  step(m.b2);
  step(m.w3);
  m.b3 -= lr * *g;
}

}  // namespace

void Hyperparams::Validate() const {
  if (hidden_width < 1) throw ValidationError("hidden_width must be positive");
  if (epochs < 1) throw ValidationError("epochs must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be positive");
  }
  if (batch_size < 0) throw ValidationError("batch_size must be nonnegative");
}

std::size_t Mlp::ParameterCount() const {
  const auto h = static_cast<std::size_t>(hidden_width);
  const auto in = static_cast<std::size_t>(input_dim);
  return h * in + h + h * h + h + h + 1;
}

std::vector<double> Mlp::Flatten() const {
  std::vector<double> out;
  out.reserve(ParameterCount());
  out.insert(out.end(), w1.begin(), w1.end());
  out.insert(out.end(), b1.begin(), b1.end());
  out.insert(out.end(), w2.begin(), w2.end());
  out.insert(out.end(), b2.begin(), b2.end());
  out.insert(out.end(), w3.begin(), w3.end());
  out.push_back(b3);
  return out;
}

void Mlp::Unflatten(std::span<const double> params) {
  if (params.size() != ParameterCount()) {
    throw ValidationError("parameter count mismatch");
  }
  auto it = params.begin();
  auto take = [&it](std::vector<double>& dst, std::size_t n) {
    dst.assign(it, it + static_cast<std::ptrdiff_t>(n));
    it += static_cast<std::ptrdiff_t>(n);
  };
  const auto h = static_cast<std::size_t>(hidden_width);
  take(w1, h * static_cast<std::size_t>(input_dim));
  take(b1, h);
  take(w2, h * h);
  take(b2, h);
  take(w3, h);
  b3 = *it;
}

void Mlp::Validate() const {
  if (input_dim < 1 || hidden_width < 1) {
    throw ValidationError("model dimensions must be positive");
  }
  const auto h = static_cast<std::size_t>(hidden_width);
  if (w1.size() != h * static_cast<std::size_t>(input_dim) || b1.size() != h ||
      w2.size() != h * h || b2.size() != h || w3.size() != h) {
    throw ValidationError("model weight arrays do not match dimensions");
  }
  for (double v : Flatten()) {
    if (!std::isfinite(v)) throw ValidationError("model has non-finite weight");
  }
}

Mlp InitMlp(int input_dim, const Hyperparams& hp) {
  hp.Validate();
  if (input_dim < 1) throw ValidationError("input_dim must be positive");
  Mlp m;
  m.input_dim = input_dim;
  m.hidden_width = hp.hidden_width;
  m.hp = hp;
  CounterRng rng(hp.seed, 0x1a17);
  const auto h = static_cast<std::size_t>(hp.hidden_width);
  auto glorot = [&rng](std::vector<double>& dst, std::size_t n, int fan_in,
                       int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    dst.resize(n);
    for (double& v : dst) v = rng.UniformRange(-limit, limit);
  };
  glorot(m.w1, h * static_cast<std::size_t>(input_dim), input_dim,
         hp.hidden_width);
  glorot(m.w2, h * h, hp.hidden_width, hp.hidden_width);
  glorot(m.w3, h, hp.hidden_width, 1);
  m.b1.assign(h, 0.0);
  m.b2.assign(h, 0.0);
  m.b3 = 0.0;
  return m;
}

double MeanSquaredError(const Mlp& model, const FeatureMatrix& features,
                        std::span<const double> targets) {
  CheckData(features, targets, model.input_dim);
  const Activations a = Forward(model, ToMatrix(features, model.input_dim));
  const Eigen::VectorXd t = ConstVectorMap(targets.data(),
                                           static_cast<Eigen::Index>(targets.size()));
  return (a.out - t).squaredNorm() / static_cast<double>(targets.size());
}

std::vector<double> MseGradient(const Mlp& model, const FeatureMatrix& features,
                                std::span<const double> targets) {
  CheckData(features, targets, model.input_dim);
  const Eigen::VectorXd t = ConstVectorMap(targets.data(),
                                           static_cast<Eigen::Index>(targets.size()));
  std::vector<double> grad;
  Backward(model, ToMatrix(features, model.input_dim), t, grad);
  return grad;
}

Mlp Train(const FeatureMatrix& features, std::span<const double> targets,
          const Hyperparams& hp) {
  hp.Validate();
  if (features.empty()) throw ValidationError("training data is empty");
  const int width = static_cast<int>(features.front().size());
  if (width < 1) throw ValidationError("features must have positive width");
  CheckData(features, targets, width);

  Mlp model = InitMlp(width, hp);
  const RowMatrix x_all = ToMatrix(features, width);
  const Eigen::VectorXd t_all =
      ConstVectorMap(targets.data(), static_cast<Eigen::Index>(targets.size()));
  const auto n = static_cast<std::size_t>(x_all.rows());
  const std::size_t batch =
      hp.batch_size == 0 ? n
                         : std::min(n, static_cast<std::size_t>(hp.batch_size));

  std::vector<double> grad;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng shuffle_rng(hp.seed, 0x5b);
  model.loss_history.reserve(static_cast<std::size_t>(hp.epochs));

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    if (batch == n) {
      Backward(model, x_all, t_all, grad);
      ApplyStep(model, grad, hp.learning_rate);
    } else {
      Shuffle(order.begin(), order.end(), shuffle_rng);
      for (std::size_t start = 0; start < n; start += batch) {
        const std::size_t end = std::min(n, start + batch);
        RowMatrix xb(static_cast<Eigen::Index>(end - start), width);
        Eigen::VectorXd tb(static_cast<Eigen::Index>(end - start));
        for (std::size_t r = start; r < end; ++r) {
          const auto row = static_cast<Eigen::Index>(r - start);
          xb.row(row) = x_all.row(static_cast<Eigen::Index>(order[r]));
          tb(row) = t_all(static_cast<Eigen::Index>(order[r]));
        }
        Backward(model, xb, tb, grad);
        ApplyStep(model, grad, hp.learning_rate);
      }
    }
    const Activations a = Forward(model, x_all);
    model.loss_history.push_back((a.out - t_all).squaredNorm() /
                                 static_cast<double>(n));
  }
  model.Validate();
  return model;
}

double PredictRaw(const Mlp& model, std::span<const Bit> features) {
  if (static_cast<int>(features.size()) != model.input_dim) {
    throw ValidationError("feature width " + std::to_string(features.size()) +
                          " does not match model input " +
                          std::to_string(model.input_dim));
  }
  RowMatrix x(1, model.input_dim);
  for (int c = 0; c < model.input_dim; ++c) x(0, c) = features[c];
  return Forward(model, x).out(0);
}

double Predict(const Mlp& model, const CellKey& cell, const BenefitVector& v) {
  const std::vector<Bit> bits = cell.bits();
  return BenefitRange(v).Clamp(PredictRaw(model, bits));
}

void RepairCrossing(PredictionRow& row) {
  if (row.pred_lower > row.pred_upper) {
    const double mid = 0.5 * (row.pred_lower + row.pred_upper);
    row.pred_lower = mid;
    row.pred_upper = mid;
    row.repaired = true;
  }
}

std::vector<PredictionRow> PredictAll(const Mlp& lower, const Mlp& upper,
                                      int n_observed, const BenefitVector& v) {
  if (lower.input_dim != n_observed || upper.input_dim != n_observed) {
    throw ValidationError("model input width does not match n_observed");
  }
  if (n_observed > kMaxInformerObserved) {
    throw ValidationError("cell space too large to predict exhaustively");
  }
  const std::uint32_t n_cells = std::uint32_t{1} << n_observed;
  const ValueRange range = BenefitRange(v);
  std::vector<PredictionRow> rows(n_cells);
  constexpr std::uint32_t kChunk = 4096;
  for (std::uint32_t start = 0; start < n_cells; start += kChunk) {
    const std::uint32_t end = std::min(n_cells, start + kChunk);
    RowMatrix x(end - start, n_observed);
    for (std::uint32_t id = start; id < end; ++id) {
      for (int c = 0; c < n_observed; ++c) {
        x(id - start, c) = static_cast<double>((id >> c) & 1u);
      }
    }
    const Eigen::VectorXd lo = Forward(lower, x).out;
    const Eigen::VectorXd hi = Forward(upper, x).out;
    for (std::uint32_t id = start; id < end; ++id) {
      PredictionRow& row = rows[id];
      row.cell_id = id;
      row.pred_lower = range.Clamp(lo(id - start));
      row.pred_upper = range.Clamp(hi(id - start));
      RepairCrossing(row);
    }
  }
  return rows;
}

std::vector<std::uint32_t> SampleCellIds(std::uint64_t n_cells,
                                         std::size_t sample_n,
                                         std::uint64_t seed) {
  if (sample_n > n_cells) {
    throw ValidationError("sample size " + std::to_string(sample_n) +
                          " exceeds cell count " + std::to_string(n_cells));
  }
  std::vector<std::uint32_t> ids(n_cells);
  std::iota(ids.begin(), ids.end(), std::uint32_t{0});
  CounterRng rng(seed);
  // Partial Fisher-Yates: the first sample_n slots end up a uniform sample.
  for (std::size_t i = 0; i < sample_n; ++i) {
    const std::uint64_t j = i + rng.Below(n_cells - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(sample_n);
  return ids;
}

Metrics Evaluate(std::span<const PredictionRow> preds,
                 std::span<const InformerRecord> truth, std::size_t sample_n,
                 std::uint64_t seed) {
  if (preds.size() != truth.size()) {
    throw ValidationError("predictions and informer cover different cell spaces");
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].cell_id != i || truth[i].cell.id() != i) {
      throw ValidationError("tables must list every cell id in ascending order");
    }
  }
  Metrics m;
  m.seed = seed;
  m.n = sample_n;
  if (sample_n == 0) return m;
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  for (std::uint32_t id : SampleCellIds(preds.size(), sample_n, seed)) {
    sum_lower += std::abs(preds[id].pred_lower - truth[id].true_lower);
    sum_upper += std::abs(preds[id].pred_upper - truth[id].true_upper);
  }
  m.mae_lower = sum_lower / static_cast<double>(sample_n);
  m.mae_upper = sum_upper / static_cast<double>(sample_n);
  return m;
}

std::string MlpToJson(const Mlp& model) {
  nlohmann::ordered_json j;
  j["architecture"] = {{"input_dim", model.input_dim},
                       {"hidden_width", model.hidden_width},
                       {"hidden_layers", 2},
                       {"activation", "tanh"},
                       {"output", "linear"}};
  j["hyperparams"] = {{"hidden_width", model.hp.hidden_width},
                      {"epochs", model.hp.epochs},
                      {"learning_rate", model.hp.learning_rate},
                      {"seed", model.hp.seed},
                      {"batch_size", model.hp.batch_size}};
  j["w1"] = model.w1;
  j["b1"] = model.b1;
  j["w2"] = model.w2;
  j["b2"] = model.b2;
  j["w3"] = model.w3;
  j["b3"] = model.b3;
  j["loss_history"] = model.loss_history;
  return j.dump() + "\n";
}

Mlp MlpFromJson(std::string_view text) {
  Mlp m;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    const auto& arch = j.at("architecture");
    m.input_dim = arch.at("input_dim").get<int>();
    m.hidden_width = arch.at("hidden_width").get<int>();
    const auto& hp = j.at("hyperparams");
    m.hp.hidden_width = hp.at("hidden_width").get<int>();
    m.hp.epochs = hp.at("epochs").get<int>();
    m.hp.learning_rate = hp.at("learning_rate").get<double>();
    m.hp.seed = hp.at("seed").get<std::uint64_t>();
    m.hp.batch_size = hp.at("batch_size").get<int>();
    m.w1 = j.at("w1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("w2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<std::vector<double>>();
    m.w3 = j.at("w3").get<std::vector<double>>();
    m.b3 = j.at("b3").get<double>();
    m.loss_history = j.at("loss_history").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad model file: ") + e.what());
  }
  m.Validate();
  return m;
}

}  // namespace unitsel
