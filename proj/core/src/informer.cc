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

#include "unitsel/errors.h"

namespace unitsel {
namespace {

void CheckWidth(const FullProfile& profile, const ScmConfig& config) {
  if (profile.z.size() != static_cast<std::size_t>(config.n_total())) {
    throw ConfigError("profile has " + std::to_string(profile.z.size()) +
                      " characteristics, config expects " +
                      std::to_string(config.n_total()));
  }
}

double BernoulliMass(double p, Bit b) { return b ? p : 1.0 - p; }

}  // namespace

ExperimentalDistribution ExactExperimental(const FullProfile& profile,
                                           const ScmConfig& config) {
  CheckWidth(profile, config);
  const double m_y = MValue(profile.z, config.weights_y);
  const double c = config.constant_c;
  const double q = config.bern_uy;
  ExperimentalDistribution e;
  e.p_y_do_x = (1.0 - q) * EvalY(1, m_y, 0, c) + q * EvalY(1, m_y, 1, c);
  e.p_y_do_xp = (1.0 - q) * EvalY(0, m_y, 0, c) + q * EvalY(0, m_y, 1, c);
  return e;
}

ObservationalJoint ExactObservational(const FullProfile& profile,
                                      const ScmConfig& config) {
  CheckWidth(profile, config);
  const double m_x = MValue(profile.z, config.weights_x);
  const double m_y = MValue(profile.z, config.weights_y);
  double joint[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (Bit u_x = 0; u_x <= 1; ++u_x) {
    for (Bit u_y = 0; u_y <= 1; ++u_y) {
      const double mass =
          BernoulliMass(config.bern_ux, u_x) * BernoulliMass(config.bern_uy, u_y);
      const Bit x = EvalX(m_x, u_x);
      const Bit y = EvalY(x, m_y, u_y, config.constant_c);
      joint[x][y] += mass;
    }
  }
  return {joint[1][1], joint[1][0], joint[0][1], joint[0][0]};
}

ResponseProfile ComputeResponseProfile(const FullProfile& profile,
                                       const ScmConfig& config) {
  CheckWidth(profile, config);
  const double m_y = MValue(profile.z, config.weights_y);
  ResponseProfile r;
  for (Bit u_y = 0; u_y <= 1; ++u_y) {
    const double mass = BernoulliMass(config.bern_uy, u_y);
    switch (ResponseTypeOf(CounterfactualPairForM(m_y, u_y, config.constant_c))) {
      case ResponseType::kComplier:
        r.p_complier += mass;
        break;
      case ResponseType::kAlwaysTaker:
        r.p_always += mass;
        break;
      case ResponseType::kNeverTaker:
        r.p_never += mass;
        break;
      case ResponseType::kDefier:
        r.p_defier += mass;
        break;
    }
  }
  return r;
}

double TrueBenefitProfile(const FullProfile& profile, const ScmConfig& config,
                          const BenefitVector& v) {
  return ExactBenefit(v, ComputeResponseProfile(profile, config));
}

std::vector<double> CompletionWeights(const CellKey& cell,
                                      const ScmConfig& config) {
  if (cell.n_observed() != config.n_observed) {
    throw ValidationError("cell width does not match config");
  }
  const int k = config.n_unobserved;
  std::vector<double> weights(std::size_t{1} << k);
  for (std::uint32_t i = 0; i < weights.size(); ++i) {
    double w = 1.0;
    for (int j = 0; j < k; ++j) {
      const Bit b = static_cast<Bit>((i >> (k - 1 - j)) & 1u);
      w *= BernoulliMass(config.bern_z[config.n_observed + j], b);
    }
    weights[i] = w;
  }
  return weights;
}

double CellProbability(const CellKey& cell, const ScmConfig& config) {
  double p = 1.0;
  for (int i = 0; i < config.n_observed; ++i) {
    p *= BernoulliMass(config.bern_z[i], cell.bit(i));
  }
  return p;
}

InformerRecord CellTruth(const CellKey& cell, const ScmConfig& config,
                         const BenefitVector& v) {
  const std::vector<double> weights = CompletionWeights(cell, config);
  InformerRecord rec;
  rec.cell = cell;
  for (std::uint32_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    const FullProfile profile = ComposeProfile(cell, i, config.n_unobserved);
    const ExperimentalDistribution e = ExactExperimental(profile, config);
    const ObservationalJoint o = ExactObservational(profile, config);
    const ResponseProfile r = ComputeResponseProfile(profile, config);
    rec.exp.p_y_do_x += w * e.p_y_do_x;
    rec.exp.p_y_do_xp += w * e.p_y_do_xp;
    rec.obs.p_xy += w * o.p_xy;
    rec.obs.p_xyp += w * o.p_xyp;
    rec.obs.p_xpy += w * o.p_xpy;
    rec.obs.p_xpyp += w * o.p_xpyp;
    rec.response.p_complier += w * r.p_complier;
    rec.response.p_always += w * r.p_always;
    rec.response.p_never += w * r.p_never;
    rec.response.p_defier += w * r.p_defier;
    rec.true_f += w * ExactBenefit(v, r);
  }
  const BoundsBreakdown b = ComputeBenefitBounds(v, rec.exp, rec.obs);
  rec.true_lower = b.lower;
  rec.true_upper = b.upper;
  return rec;
}

std::vector<InformerRecord> InformerTable(const ScmConfig& config,
                                          const BenefitVector& v) {
  config.Validate();
  if (config.n_observed > kMaxInformerObserved) {
    throw ValidationError("informer table limited to 2^" +
                          std::to_string(kMaxInformerObserved) + " cells");
  }
  const std::uint32_t n_cells = std::uint32_t{1} << config.n_observed;
  std::vector<InformerRecord> table;
  table.reserve(n_cells);
  for (std::uint32_t id = 0; id < n_cells; ++id) {
    table.push_back(CellTruth(CellKey(id, config.n_observed), config, v));
  }
  return table;
}

}  // namespace unitsel
