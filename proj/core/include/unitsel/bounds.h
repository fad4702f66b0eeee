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

#ifndef UNITSEL_BOUNDS_H_
#define UNITSEL_BOUNDS_H_

#include <string>
#include <string_view>

namespace unitsel {

// Payoffs for selecting one complier, always-taker, never-taker and defier.
struct BenefitVector {
  double beta = 1.0;
  double gamma = -1.0;
  double theta = -1.0;
  double delta = -2.0;

  // Parses "b,g,t,d". Throws ValidationError.
  static BenefitVector Parse(std::string_view text);
  std::string ToString() const;
};

// P(y_x | c) and P(y_{x'} | c).
struct ExperimentalDistribution {
  double p_y_do_x = 0.0;
  double p_y_do_xp = 0.0;

  void Validate() const;
};

// P(x,y|c), P(x,y'|c), P(x',y|c), P(x',y'|c).
struct ObservationalJoint {
  double p_xy = 0.0;
  double p_xyp = 0.0;
  double p_xpy = 0.0;
  double p_xpyp = 0.0;

  double p_y() const { return p_xy + p_xpy; }
  void Validate() const;
};

// Probabilities of the four response types within a cell.
struct ResponseProfile {
  double p_complier = 0.0;
  double p_always = 0.0;
  double p_never = 0.0;
  double p_defier = 0.0;

  // The experimental distribution this profile induces.
  ExperimentalDistribution Induced() const {
    return {p_complier + p_always, p_always + p_defier};
  }
  void Validate() const;
};

// Bounds on P(y_x, y'_{x'} | c).
struct PnsBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct BoundsBreakdown {
  double sigma = 0.0;
  double w = 0.0;
  double l = 0.0;
  double u = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool consistent = true;
};

struct ValueRange {
  double min = 0.0;
  double max = 0.0;

  double Clamp(double v) const { return v < min ? min : (v > max ? max : v); }
};

double Sigma(const BenefitVector& v);

double WTerm(const BenefitVector& v, const ExperimentalDistribution& e);

// Unclamped; l > u signals inputs no model can generate jointly.
PnsBounds ComputePnsBounds(const ExperimentalDistribution& e,
                           const ObservationalJoint& o);

// Interval on the benefit function from experimental and observational data.
// sigma > 0 gives [w + sigma*l, w + sigma*u], sigma < 0 the mirror image,
// and sigma == 0 the point [w, w].
BoundsBreakdown ComputeBenefitBounds(const BenefitVector& v,
                                     const ExperimentalDistribution& e,
                                     const ObservationalJoint& o);

double ExactBenefit(const BenefitVector& v, const ResponseProfile& r);

// Attainable range of ExactBenefit over all response profiles.
ValueRange BenefitRange(const BenefitVector& v);

}  // namespace unitsel

#endif  // UNITSEL_BOUNDS_H_
