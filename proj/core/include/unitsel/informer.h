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

#ifndef UNITSEL_INFORMER_H_
#define UNITSEL_INFORMER_H_

#include <cstdint>
#include <vector>

#include "unitsel/bounds.h"
#include "unitsel/model.h"

namespace unitsel {

// Exact per-cell ground truth, computed by enumerating the exogenous noise
// (U_X, U_Y) and every completion of the unobserved characteristics.
struct InformerRecord {
  CellKey cell{0, 1};
  ExperimentalDistribution exp;
  ObservationalJoint obs;
  ResponseProfile response;
  double true_f = 0.0;
  double true_lower = 0.0;
  double true_upper = 0.0;
};

// Largest cell space InformerTable will enumerate.
inline constexpr int kMaxInformerObserved = 24;

ExperimentalDistribution ExactExperimental(const FullProfile& profile,
                                           const ScmConfig& config);

// Full (x, y) joint under the natural treatment mechanism.
ObservationalJoint ExactObservational(const FullProfile& profile,
                                      const ScmConfig& config);

ResponseProfile ComputeResponseProfile(const FullProfile& profile,
                                       const ScmConfig& config);

double TrueBenefitProfile(const FullProfile& profile, const ScmConfig& config,
                          const BenefitVector& v);

// Weight of each completion of the unobserved characteristics, indexed as in
// ComposeProfile. Characteristics are independent, so the weights do not
// depend on the observed bits of `cell`.
std::vector<double> CompletionWeights(const CellKey& cell,
                                      const ScmConfig& config);

// Marginal probability of observing the cell.
double CellProbability(const CellKey& cell, const ScmConfig& config);

// Mixes the per-completion distributions and benefit, then applies the
// benefit bounds to the mixed distributions.
InformerRecord CellTruth(const CellKey& cell, const ScmConfig& config,
                         const BenefitVector& v);

// One record per cell id, ascending. Throws ValidationError when
// n_observed exceeds kMaxInformerObserved.
std::vector<InformerRecord> InformerTable(const ScmConfig& config,
                                          const BenefitVector& v);

}  // namespace unitsel

#endif  // UNITSEL_INFORMER_H_
