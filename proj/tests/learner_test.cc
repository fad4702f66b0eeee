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

#include <gtest/gtest.h>

#include <cmath>

#include "unitsel/errors.h"
#include "unitsel/rng.h"

namespace unitsel {
namespace {

const BenefitVector kDefault{1, -1, -1, -2};

FeatureMatrix AllRows(int width) {
  FeatureMatrix rows;
  for (std::uint32_t id = 0; id < (1u << width); ++id) {
    rows.push_back(CellKey(id, width).bits());
  }
  return rows;
}

Hyperparams SmallHp(std::uint64_t seed = 1) {
  Hyperparams hp;
  hp.hidden_width = 16;
  hp.epochs = 1500;
  hp.learning_rate = 0.05;
  hp.seed = seed;
  return hp;
}

TEST(HyperparamsTest, Validate) {
  Hyperparams hp;
  EXPECT_NO_THROW(hp.Validate());
  hp.learning_rate = 0.0;
  EXPECT_THROW(hp.Validate(), ValidationError);
  hp = Hyperparams{};
  hp.hidden_width = 0;
  EXPECT_THROW(hp.Validate(), ValidationError);
  hp = Hyperparams{};
  hp.batch_size = -1;
  EXPECT_THROW(hp.Validate(), ValidationError);
}

TEST(InitMlpTest, ShapesAndGlorotRange) {
  const Mlp m = InitMlp(15, Hyperparams{});
  EXPECT_EQ(m.w1.size(), 128u * 15u);
  EXPECT_EQ(m.w2.size(), 128u * 128u);
  EXPECT_EQ(m.w3.size(), 128u);
  EXPECT_EQ(m.ParameterCount(), 128u * 15 + 128 + 128 * 128 + 128 + 128 + 1);
  const double limit1 = std::sqrt(6.0 / (15 + 128));
  for (double w : m.w1) EXPECT_LE(std::abs(w), limit1);
  for (double b : m.b1) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(m.b3, 0.0);
}

Hyperparams DefaultHp(std::uint64_t seed = 1) {
  Hyperparams hp;
  hp.seed = seed;
  return hp;
}

TEST(TrainTest, FitsConstant) {
  const FeatureMatrix x = AllRows(4);
  const std::vector<double> y(x.size(), 0.3);
  const Mlp m = Train(x, y, DefaultHp());
  for (const auto& row : x) EXPECT_NEAR(PredictRaw(m, row), 0.3, 0.01);
}

TEST(TrainTest, ConstantGeneralizesToUnseenCells) {
  const FeatureMatrix all = AllRows(4);
  const FeatureMatrix seen(all.begin(), all.begin() + 12);
  const std::vector<double> y(seen.size(), 0.3);
  const Mlp m = Train(seen, y, DefaultHp());
  for (std::uint32_t id = 12; id < 16; ++id) {
    EXPECT_NEAR(Predict(m, CellKey(id, 4), kDefault), 0.3, 0.05);
  }
}

TEST(TrainTest, FitsOneBitTarget) {
  FeatureMatrix x = AllRows(7);
  x.resize(100);
  std::vector<double> y;
  for (const auto& row : x) y.push_back(row[2] ? 1.0 : 0.0);
  const Mlp m = Train(x, y, DefaultHp());
  double mae = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mae += std::abs(PredictRaw(m, x[i]) - y[i]);
  EXPECT_LE(mae / x.size(), 0.05);
}

TEST(TrainTest, MinibatchAlsoFits) {
  const FeatureMatrix x = AllRows(4);
  std::vector<double> y;
  for (const auto& row : x) y.push_back(row[0] ? 0.5 : 0.0);
  Hyperparams hp = SmallHp();
  hp.batch_size = 4;
  hp.epochs = 500;
  const Mlp m = Train(x, y, hp);
  EXPECT_LT(m.loss_history.back(), 0.01);
}

TEST(TrainTest, DeterministicAndSeedSensitive) {
  const FeatureMatrix x = AllRows(3);
  std::vector<double> y;
  for (const auto& row : x) y.push_back(row[0] - 0.5 * row[1]);
  Hyperparams hp = SmallHp(7);
  hp.epochs = 50;
  EXPECT_EQ(MlpToJson(Train(x, y, hp)), MlpToJson(Train(x, y, hp)));
  Hyperparams other = hp;
  other.seed = 8;
  EXPECT_NE(Train(x, y, hp).Flatten(), Train(x, y, other).Flatten());
}

TEST(TrainTest, LossDecreases) {
  const FeatureMatrix x = AllRows(5);
  std::vector<double> y;
  for (const auto& row : x) y.push_back(row[0] * row[3] - 0.3 * row[4]);
  Hyperparams hp = SmallHp();
  hp.epochs = 300;
  const Mlp m = Train(x, y, hp);
  ASSERT_EQ(m.loss_history.size(), 300u);
  EXPECT_LE(m.loss_history.back(), m.loss_history.front());
  EXPECT_DOUBLE_EQ(m.loss_history.back(), MeanSquaredError(m, x, y));
}

TEST(TrainTest, RejectsBadInputs) {
  EXPECT_THROW(Train({}, {}, SmallHp()), ValidationError);
  const FeatureMatrix ragged = {{0, 1}, {1}};
  const std::vector<double> y = {0.0, 1.0};
  EXPECT_THROW(Train(ragged, y, SmallHp()), ValidationError);
  const FeatureMatrix x = AllRows(1);
  const std::vector<double> nan = {0.0, std::nan("")};
  EXPECT_THROW(Train(x, nan, SmallHp()), ValidationError);
  const std::vector<double> short_y = {0.0};
  EXPECT_THROW(Train(x, short_y, SmallHp()), ValidationError);
}

// Central differences against the analytic gradient.
TEST(MseGradientTest, MatchesFiniteDifferences) {
  Hyperparams hp;
  hp.hidden_width = 5;
  hp.seed = 3;
  Mlp m = InitMlp(4, hp);
  CounterRng rng(9);
  std::vector<double> params = m.Flatten();
  for (double& p : params) p += rng.UniformRange(-0.3, 0.3);
  m.Unflatten(params);
  const FeatureMatrix x = AllRows(4);
  std::vector<double> y;
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(rng.UniformRange(-2, 1));

  const std::vector<double> grad = MseGradient(m, x, y);
  ASSERT_EQ(grad.size(), m.ParameterCount());
  const double h = 1e-5;
  for (std::size_t k = 0; k < params.size(); ++k) {
    std::vector<double> plus = params, minus = params;
    plus[k] += h;
    minus[k] -= h;
    Mlp mp = m, mm = m;
    mp.Unflatten(plus);
    mm.Unflatten(minus);
    const double numeric = (MeanSquaredError(mp, x, y) - MeanSquaredError(mm, x, y)) / (2 * h);
    const double scale = std::max({std::abs(numeric), std::abs(grad[k]), 1e-6});
    EXPECT_LE(std::abs(numeric - grad[k]) / scale, 1e-4) << "parameter " << k;
  }
}

TEST(PredictTest, ClampsToBenefitRange) {
  Hyperparams hp;
  hp.hidden_width = 2;
  Mlp m = InitMlp(3, hp);
  std::fill(m.w3.begin(), m.w3.end(), 0.0);
  m.b3 = 1.7;
  EXPECT_EQ(Predict(m, CellKey(5, 3), kDefault), 1.0);
  m.b3 = -3.5;
  EXPECT_EQ(Predict(m, CellKey(5, 3), kDefault), -2.0);
  m.b3 = 0.25;
  EXPECT_EQ(Predict(m, CellKey(5, 3), kDefault), 0.25);
}

Mlp ConstantModel(int input_dim, double value) {
  Hyperparams hp;
  hp.hidden_width = 2;
  Mlp m = InitMlp(input_dim, hp);
  std::fill(m.w3.begin(), m.w3.end(), 0.0);
  m.b3 = value;
  return m;
}

TEST(RepairCrossingTest, Midpoint) {
  PredictionRow row{0, 0.4, 0.1, false};
  RepairCrossing(row);
  EXPECT_DOUBLE_EQ(row.pred_lower, 0.25);
  EXPECT_DOUBLE_EQ(row.pred_upper, 0.25);
  EXPECT_TRUE(row.repaired);
  PredictionRow ok{0, 0.1, 0.4, false};
  RepairCrossing(ok);
  EXPECT_EQ(ok, (PredictionRow{0, 0.1, 0.4, false}));
}

TEST(PredictAllTest, RowPerCellAndOrdered) {
  const auto rows = PredictAll(ConstantModel(6, 0.4), ConstantModel(6, 0.1), 6, kDefault);
  ASSERT_EQ(rows.size(), 64u);
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].cell_id, i);
    EXPECT_LE(rows[i].pred_lower, rows[i].pred_upper);
    EXPECT_TRUE(rows[i].repaired);
  }
}

TEST(PredictAllPropertyTest, LowerNeverExceedsUpper) {
  Hyperparams hp;
  hp.hidden_width = 8;
  hp.seed = 1;
  const Mlp lower = InitMlp(7, hp);
  hp.seed = 2;
  const Mlp upper = InitMlp(7, hp);
  for (const auto& row : PredictAll(lower, upper, 7, kDefault)) {
    EXPECT_LE(row.pred_lower, row.pred_upper);
    EXPECT_GE(row.pred_lower, -2.0);
    EXPECT_LE(row.pred_upper, 1.0);
  }
}

TEST(SampleCellIdsTest, DistinctAndSeeded) {
  const auto a = SampleCellIds(32768, 200, 0);
  EXPECT_EQ(a.size(), 200u);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_TRUE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  EXPECT_EQ(a, SampleCellIds(32768, 200, 0));
  EXPECT_NE(a, SampleCellIds(32768, 200, 1));
  EXPECT_EQ(SampleCellIds(8, 8, 0).size(), 8u);
  EXPECT_THROW(SampleCellIds(8, 200, 0), ValidationError);
}

std::vector<InformerRecord> Truth(int n_observed) {
  std::vector<InformerRecord> truth;
  for (std::uint32_t id = 0; id < (1u << n_observed); ++id) {
    InformerRecord r;
    r.cell = CellKey(id, n_observed);
    r.true_lower = -1.0 + 0.01 * id;
    r.true_upper = r.true_lower + 0.5;
    truth.push_back(r);
  }
  return truth;
}

TEST(EvaluateTest, ExactAndShifted) {
  const auto truth = Truth(6);
  std::vector<PredictionRow> preds;
  for (const auto& r : truth) preds.push_back({r.cell.id(), r.true_lower, r.true_upper, false});
  Metrics m = Evaluate(preds, truth, 20, 4);
  EXPECT_EQ(m.n, 20u);
  EXPECT_EQ(m.mae_lower, 0.0);
  EXPECT_EQ(m.mae_upper, 0.0);
  for (auto& p : preds) {
    p.pred_lower += 0.1;
    p.pred_upper -= 0.1;
  }
  m = Evaluate(preds, truth, 20, 4);
  EXPECT_NEAR(m.mae_lower, 0.1, 1e-12);
  EXPECT_NEAR(m.mae_upper, 0.1, 1e-12);
  preds.pop_back();
  EXPECT_THROW(Evaluate(preds, truth, 20, 4), ValidationError);
}

TEST(MlpJsonTest, RoundTripIsExact) {
  const FeatureMatrix x = AllRows(3);
  const std::vector<double> y(x.size(), 0.1);
  Hyperparams hp = SmallHp();
  hp.epochs = 5;
  const Mlp m = Train(x, y, hp);
  const Mlp back = MlpFromJson(MlpToJson(m));
  EXPECT_EQ(back.Flatten(), m.Flatten());
  EXPECT_EQ(back.hp.seed, m.hp.seed);
  EXPECT_EQ(back.loss_history, m.loss_history);
  for (const auto& row : x) EXPECT_EQ(PredictRaw(back, row), PredictRaw(m, row));
  EXPECT_THROW(MlpFromJson("{}"), ValidationError);
}

}  // namespace
}  // namespace unitsel
