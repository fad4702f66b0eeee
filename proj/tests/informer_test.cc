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

#include "unitsel/informer.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "test_support.h"
#include "unitsel/errors.h"
#include "unitsel/rng.h"

namespace unitsel {
namespace {

const BenefitVector kDefault{1, -1, -1, -2};

// A config where every weight is zero, so M_Y = 0 on every profile.
ScmConfig ZeroWeightConfig(double bern_uy) {
  ScmConfig c = DefaultConfig();
  std::fill(c.weights_x.begin(), c.weights_x.end(), 0.0);
  std::fill(c.weights_y.begin(), c.weights_y.end(), 0.0);
  c.bern_uy = bern_uy;
  return c;
}

FullProfile RandomProfile(CounterRng& rng, int n) {
  FullProfile p;
  for (int i = 0; i < n; ++i) p.z.push_back(rng.Bernoulli(0.5));
  return p;
}

TEST(ExactExperimentalTest, ZeroMy) {
  const ScmConfig c = ZeroWeightConfig(DefaultConfig().bern_uy);
  const FullProfile p{std::vector<Bit>(20, 0)};
  const ExperimentalDistribution e = ExactExperimental(p, c);
  EXPECT_DOUBLE_EQ(e.p_y_do_x, 1.0);
  EXPECT_DOUBLE_EQ(e.p_y_do_xp, 0.0);
}

TEST(ExactExperimentalTest, DegenerateUyUsesSingleBranch) {
  ScmConfig c = testing::DeskModel();
  c.bern_uy = 0.0;
  CounterRng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const FullProfile p = RandomProfile(rng, c.n_total());
    const double m_y = MValue(p.z, c.weights_y);
    const ExperimentalDistribution e = ExactExperimental(p, c);
    EXPECT_EQ(e.p_y_do_x, EvalY(1, m_y, 0, c.constant_c));
    EXPECT_EQ(e.p_y_do_xp, EvalY(0, m_y, 0, c.constant_c));
  }
  EXPECT_THROW(ExactExperimental(FullProfile{{1, 0}}, c), ConfigError);
}

TEST(ExactObservationalTest, DegenerateNoiseIsAPointMass) {
  ScmConfig c = DefaultConfig();
  c.bern_ux = 0.0;
  c.bern_uy = 0.0;
  CounterRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const ObservationalJoint o = ExactObservational(RandomProfile(rng, 20), c);
    const double entries[4] = {o.p_xy, o.p_xyp, o.p_xpy, o.p_xpyp};
    int ones = 0;
    for (double v : entries) {
      EXPECT_TRUE(v == 0.0 || v == 1.0);
      ones += v == 1.0;
    }
    EXPECT_EQ(ones, 1);
  }
}

TEST(ExactObservationalTest, SumsToOneAndMatchesFourTermMarginal) {
  const ScmConfig c = DefaultConfig();
  CounterRng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const FullProfile p = RandomProfile(rng, 20);
    const ObservationalJoint o = ExactObservational(p, c);
    EXPECT_NEAR(o.p_xy + o.p_xyp + o.p_xpy + o.p_xpyp, 1.0, 1e-15);
    // P(Y=1 | z) as the four-term sum over (U_X, U_Y).
    const double mx = MValue(p.z, c.weights_x);
    const double my = MValue(p.z, c.weights_y);
    const double qx = c.bern_ux;
    const double qy = c.bern_uy;
    const double cc = c.constant_c;
    const double marginal =
        (1 - qx) * (1 - qy) * EvalY(EvalX(mx, 0), my, 0, cc) +
        (1 - qx) * qy * EvalY(EvalX(mx, 0), my, 1, cc) +
        qx * (1 - qy) * EvalY(EvalX(mx, 1), my, 0, cc) +
        qx * qy * EvalY(EvalX(mx, 1), my, 1, cc);
    EXPECT_NEAR(o.p_y(), marginal, 1e-15);
  }
}

TEST(ResponseProfileTest, Examples) {
  // M_Y = 0 under the shipped C: complier for both U_Y values.
  const ScmConfig zero = ZeroWeightConfig(DefaultConfig().bern_uy);
  const ResponseProfile all = ComputeResponseProfile(FullProfile{std::vector<Bit>(20, 0)}, zero);
  EXPECT_DOUBLE_EQ(all.p_complier, 1.0);
  EXPECT_DOUBLE_EQ(TrueBenefitProfile(FullProfile{std::vector<Bit>(20, 0)}, zero, kDefault), 1.0);

  // M_Y = -0.03: u_y=0 sums to (-0.03, 0.945), a complier; u_y=1 sums to
  // (0.97, 1.945), an always-taker.
  ScmConfig mixed = zero;
  mixed.weights_y[0] = -0.03;
  FullProfile p{std::vector<Bit>(20, 0)};
  p.z[0] = 1;
  EXPECT_EQ(ResponseTypeOf(CounterfactualPairFor(p, 0, mixed)), ResponseType::kComplier);
  EXPECT_EQ(ResponseTypeOf(CounterfactualPairFor(p, 1, mixed)), ResponseType::kAlwaysTaker);
  const ResponseProfile r = ComputeResponseProfile(p, mixed);
  EXPECT_NEAR(r.p_complier, 0.0773891890747, 1e-13);
  EXPECT_NEAR(r.p_always, 0.9226108109253, 1e-13);
  EXPECT_EQ(r.p_never, 0.0);
  EXPECT_EQ(r.p_defier, 0.0);
  EXPECT_NEAR(TrueBenefitProfile(p, mixed, kDefault), -0.8452216218506, 1e-13);
}

TEST(ResponseProfileTest, TFormulaAgreesWithExactBenefit) {
  const ScmConfig c = DefaultConfig();
  CounterRng rng(12);
  double max_delta = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const FullProfile p = RandomProfile(rng, 20);
    // Indicator form: P(U_Y=0)(T0-T2-T4-2T6) + P(U_Y=1)(T1-T3-T5-2T7).
    double t_form = 0.0;
    for (Bit u_y = 0; u_y <= 1; ++u_y) {
      const CounterfactualPair pair = CounterfactualPairFor(p, u_y, c);
      const double complier = pair.y_control == 0 && pair.y_treated == 1;
      const double always = pair.y_control == 1 && pair.y_treated == 1;
      const double never = pair.y_control == 0 && pair.y_treated == 0;
      const double defier = pair.y_control == 1 && pair.y_treated == 0;
      const double mass = u_y ? c.bern_uy : 1.0 - c.bern_uy;
      t_form += mass * (complier - always - never - 2 * defier);
    }
    const ResponseProfile r = ComputeResponseProfile(p, c);
    EXPECT_NEAR(r.p_complier + r.p_always + r.p_never + r.p_defier, 1.0, 1e-15);
    max_delta = std::max(max_delta, std::abs(t_form - TrueBenefitProfile(p, c, kDefault)));
  }
  EXPECT_LT(max_delta, 1e-12);
}

TEST(CompletionWeightsTest, Examples) {
  const ScmConfig c = DefaultConfig();
  const std::vector<double> w = CompletionWeights(CellKey(0, 15), c);
  ASSERT_EQ(w.size(), 32u);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-15);
  // Product of (1 - p) over the five unobserved parameters.
  EXPECT_NEAR(w[0], 0.005405043824868601, 1e-15);
  EXPECT_EQ(CompletionWeights(CellKey(12345, 15), c), w);

  ScmConfig none = testing::DeskModel();
  none.n_unobserved = 0;
  none.weights_x.resize(8);
  none.weights_y.resize(8);
  none.bern_z.resize(8);
  const auto single = CompletionWeights(CellKey(3, 8), none);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], 1.0);
}

TEST(CompletionWeightsTest, SumToOneForRandomConfigs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ScmConfig c = RandomConfig(3, 6, seed);
    const auto w = CompletionWeights(CellKey(0, 3), c);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(CellTruthTest, NoUnobservedEqualsSingleProfile) {
  ScmConfig c = RandomConfig(6, 0, 77);
  for (std::uint32_t id = 0; id < 64; ++id) {
    const CellKey cell(id, 6);
    const InformerRecord rec = CellTruth(cell, c, kDefault);
    const FullProfile p = ComposeProfile(cell, 0, 0);
    const ExperimentalDistribution e = ExactExperimental(p, c);
    const ObservationalJoint o = ExactObservational(p, c);
    EXPECT_EQ(rec.exp.p_y_do_x, e.p_y_do_x);
    EXPECT_EQ(rec.exp.p_y_do_xp, e.p_y_do_xp);
    EXPECT_EQ(rec.obs.p_xy, o.p_xy);
    EXPECT_EQ(rec.obs.p_xpyp, o.p_xpyp);
    EXPECT_EQ(rec.true_f, TrueBenefitProfile(p, c, kDefault));
  }
}

TEST(CellTruthTest, MixtureLinearityAndContainment) {
  const ScmConfig c = testing::DeskModel();
  for (std::uint32_t id = 0; id < 256; ++id) {
    const CellKey cell(id, 8);
    const InformerRecord rec = CellTruth(cell, c, kDefault);
    const auto w = CompletionWeights(cell, c);
    double mixed = 0.0;
    for (std::uint32_t i = 0; i < w.size(); ++i) {
      mixed += w[i] * TrueBenefitProfile(ComposeProfile(cell, i, 3), c, kDefault);
    }
    EXPECT_NEAR(rec.true_f, mixed, 1e-12);
    EXPECT_GE(rec.true_f, rec.true_lower - 1e-9);
    EXPECT_LE(rec.true_f, rec.true_upper + 1e-9);
    EXPECT_NO_THROW(rec.exp.Validate());
    EXPECT_NO_THROW(rec.obs.Validate());
    EXPECT_NO_THROW(rec.response.Validate());
    EXPECT_NEAR(rec.true_f,
                WTerm(kDefault, rec.exp) + Sigma(kDefault) * rec.response.p_complier,
                1e-9);
  }
}

// Bounds must come from the mixed distributions. Mixing per-completion
// bounds would give a narrower (or equal) interval.
TEST(CellTruthTest, MixedDistributionBoundsContainMixedPerCompletionBounds) {
  const ScmConfig c = testing::DeskModel();
  for (std::uint32_t id = 0; id < 256; ++id) {
    const CellKey cell(id, 8);
    const InformerRecord rec = CellTruth(cell, c, kDefault);
    const auto w = CompletionWeights(cell, c);
    double lo = 0.0;
    double hi = 0.0;
    for (std::uint32_t i = 0; i < w.size(); ++i) {
      const FullProfile p = ComposeProfile(cell, i, 3);
      const BoundsBreakdown b = ComputeBenefitBounds(
          kDefault, ExactExperimental(p, c), ExactObservational(p, c));
      lo += w[i] * b.lower;
      hi += w[i] * b.upper;
    }
    EXPECT_LE(rec.true_lower, lo + 1e-12);
    EXPECT_GE(rec.true_upper, hi - 1e-12);
  }
}

TEST(InformerTableTest, SizesAndDeterminism) {
  const auto desk = InformerTable(testing::DeskModel(), kDefault);
  EXPECT_EQ(desk.size(), 256u);
  for (std::uint32_t i = 0; i < desk.size(); ++i) EXPECT_EQ(desk[i].cell.id(), i);
  const auto again = InformerTable(testing::DeskModel(), kDefault);
  for (std::size_t i = 0; i < desk.size(); ++i) {
    EXPECT_EQ(desk[i].true_f, again[i].true_f);
    EXPECT_EQ(desk[i].true_lower, again[i].true_lower);
  }
  const auto shipped = InformerTable(DefaultConfig(), kDefault);
  EXPECT_EQ(shipped.size(), 32768u);
  for (const InformerRecord& rec : shipped) {
    EXPECT_GE(rec.true_f, rec.true_lower - 1e-9);
    EXPECT_LE(rec.true_f, rec.true_upper + 1e-9);
  }
}

TEST(InformerTableTest, SizeGuard) {
  const ScmConfig big = RandomConfig(25, 0, 1);
  EXPECT_THROW(InformerTable(big, kDefault), ValidationError);
}

TEST(CellProbabilityTest, SumsToOne) {
  const ScmConfig c = testing::DeskModel();
  double total = 0.0;
  for (std::uint32_t id = 0; id < 256; ++id) total += CellProbability(CellKey(id, 8), c);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
}  // namespace unitsel
