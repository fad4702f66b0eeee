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

#include "unitsel/bounds.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "unitsel/errors.h"

namespace unitsel {
namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kConsistencySlack = 1e-12;

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(name) + " outside [0,1]: " +
                          std::to_string(p));
  }
}

}  // namespace

BenefitVector BenefitVector::Parse(std::string_view text) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string token(text.substr(start, end - start));
    char* tail = nullptr;
    const double value = std::strtod(token.c_str(), &tail);
    if (token.empty() || tail == token.c_str() || *tail != '\0' ||
        !std::isfinite(value)) {
      throw ValidationError("bad benefit vector entry '" + token + "'");
    }
    parts.push_back(value);
    start = end + 1;
  }
  if (parts.size() != 4) {
    throw ValidationError("benefit vector needs four comma-separated values");
  }
  return {parts[0], parts[1], parts[2], parts[3]};
}

std::string BenefitVector::ToString() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g", beta, gamma,
                theta, delta);
  return buf;
}

void ExperimentalDistribution::Validate() const {
  CheckProbability(p_y_do_x, "p_y_do_x");
  CheckProbability(p_y_do_xp, "p_y_do_xp");
}

void ObservationalJoint::Validate() const {
  CheckProbability(p_xy, "p_xy");
  CheckProbability(p_xyp, "p_xyp");
  CheckProbability(p_xpy, "p_xpy");
  CheckProbability(p_xpyp, "p_xpyp");
  if (std::abs(p_xy + p_xyp + p_xpy + p_xpyp - 1.0) > kSumTolerance) {
    throw ValidationError("observational joint does not sum to 1");
  }
}

void ResponseProfile::Validate() const {
  CheckProbability(p_complier, "p_complier");
  CheckProbability(p_always, "p_always");
  CheckProbability(p_never, "p_never");
  CheckProbability(p_defier, "p_defier");
  if (std::abs(p_complier + p_always + p_never + p_defier - 1.0) >
      kSumTolerance) {
    throw ValidationError("response profile does not sum to 1");
  }
}

double Sigma(const BenefitVector& v) {
  return v.beta - v.gamma - v.theta + v.delta;
}

double WTerm(const BenefitVector& v, const ExperimentalDistribution& e) {
  return (v.gamma - v.delta) * e.p_y_do_x + v.delta * e.p_y_do_xp +
         v.theta * (1.0 - e.p_y_do_xp);
}

PnsBounds ComputePnsBounds(const ExperimentalDistribution& e,
                           const ObservationalJoint& o) {
  const double p_y = o.p_y();
  const double lower = std::max({0.0, e.p_y_do_x - e.p_y_do_xp,
                                 p_y - e.p_y_do_xp, e.p_y_do_x - p_y});
  const double upper =
      std::min({e.p_y_do_x, 1.0 - e.p_y_do_xp, o.p_xy + o.p_xpyp,
                e.p_y_do_x - e.p_y_do_xp + o.p_xpy + o.p_xyp});
  return {lower, upper};
}

BoundsBreakdown ComputeBenefitBounds(const BenefitVector& v,
                                     const ExperimentalDistribution& e,
                                     const ObservationalJoint& o) {
  BoundsBreakdown b;
  b.sigma = Sigma(v);
  b.w = WTerm(v, e);
  const PnsBounds pns = ComputePnsBounds(e, o);
  b.l = pns.lower;
  b.u = pns.upper;
  b.consistent = b.l <= b.u + kConsistencySlack;
  if (b.sigma > 0.0) {
    b.lower = b.w + b.sigma * b.l;
    b.upper = b.w + b.sigma * b.u;
  } else if (b.sigma < 0.0) {
    b.lower = b.w + b.sigma * b.u;
    b.upper = b.w + b.sigma * b.l;
  } else {
    b.lower = b.w;
    b.upper = b.w;
  }
  return b;
}

double ExactBenefit(const BenefitVector& v, const ResponseProfile& r) {
  return v.beta * r.p_complier + v.gamma * r.p_always + v.theta * r.p_never +
         v.delta * r.p_defier;
}

ValueRange BenefitRange(const BenefitVector& v) {
  return {std::min({v.beta, v.gamma, v.theta, v.delta}),
          std::max({v.beta, v.gamma, v.theta, v.delta})};
}

}  // namespace unitsel
