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

#include "unitsel/cells.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "unitsel/errors.h"
#include "unitsel/rng.h"

namespace unitsel {

CellCounts& CellCounts::operator+=(const CellCounts& other) {
  exp_treated += other.exp_treated;
  exp_treated_y1 += other.exp_treated_y1;
  exp_control += other.exp_control;
  exp_control_y1 += other.exp_control_y1;
  obs_xy += other.obs_xy;
  obs_xyp += other.obs_xyp;
  obs_xpy += other.obs_xpy;
  obs_xpyp += other.obs_xpyp;
  return *this;
}

CountMap Aggregate(std::span<const Sample> samples, Regime regime,
                   int n_observed) {
  if (n_observed < 1 || n_observed > kMaxObserved) {
    throw ValidationError("n_observed out of range");
  }
  const std::uint32_t limit = std::uint32_t{1} << n_observed;
  // Dense accumulation, then compaction into the ordered map.
  std::vector<CellCounts> dense;
  const bool use_dense = n_observed <= 20;
  if (use_dense) dense.resize(limit);
  CountMap sparse;
  for (const Sample& s : samples) {
    if (s.z >= limit || s.x > 1 || s.y > 1) {
      throw ValidationError("sample does not fit " +
                            std::to_string(n_observed) + " observed bits");
    }
    CellCounts& c = use_dense ? dense[s.z] : sparse[s.z];
    if (regime == Regime::kExperimental) {
      if (s.x) {
        ++c.exp_treated;
        c.exp_treated_y1 += s.y;
      } else {
        ++c.exp_control;
        c.exp_control_y1 += s.y;
      }
    } else if (s.x) {
      ++(s.y ? c.obs_xy : c.obs_xyp);
    } else {
      ++(s.y ? c.obs_xpy : c.obs_xpyp);
    }
  }
  if (!use_dense) return sparse;
  CountMap out;
  for (std::uint32_t id = 0; id < limit; ++id) {
    const CellCounts& c = dense[id];
    if (c.n_exp() + c.n_obs() > 0) out.emplace_hint(out.end(), id, c);
  }
  return out;
}

void MergeCounts(CountMap& into, const CountMap& from) {
  for (const auto& [id, counts] : from) into[id] += counts;
}

CellEstimate Estimate(const CellCounts& counts) {
  if (counts.exp_treated == 0 || counts.exp_control == 0) {
    throw IneligibleCellError("empty experimental arm");
  }
  const std::uint64_t n_obs = counts.n_obs();
  if (n_obs == 0) throw IneligibleCellError("no observational samples");
  CellEstimate est;
  est.exp.p_y_do_x = static_cast<double>(counts.exp_treated_y1) /
                     static_cast<double>(counts.exp_treated);
  est.exp.p_y_do_xp = static_cast<double>(counts.exp_control_y1) /
                      static_cast<double>(counts.exp_control);
  const auto total = static_cast<double>(n_obs);
  est.obs.p_xy = static_cast<double>(counts.obs_xy) / total;
  est.obs.p_xyp = static_cast<double>(counts.obs_xyp) / total;
  est.obs.p_xpy = static_cast<double>(counts.obs_xpy) / total;
  est.obs.p_xpyp = static_cast<double>(counts.obs_xpyp) / total;
  return est;
}

const char* DropReasonName(DropReason reason) {
  switch (reason) {
    case DropReason::kBelowThreshold:
      return "BELOW_THRESHOLD";
    case DropReason::kInconsistent:
      return "INCONSISTENT";
    case DropReason::kZeroArm:
      return "ZERO_ARM";
  }
  return "UNKNOWN";
}

std::size_t LabelSet::CountDropped(DropReason reason) const {
  return static_cast<std::size_t>(
      std::count_if(dropped.begin(), dropped.end(),
                    [reason](const DroppedCell& d) { return d.reason == reason; }));
}

LabelSet BuildLabels(const CountMap& exp_counts, const CountMap& obs_counts,
                     const BenefitVector& v, int n_observed,
                     std::uint64_t threshold) {
  std::set<std::uint32_t> ids;
  for (const auto& [id, c] : exp_counts) ids.insert(id);
  for (const auto& [id, c] : obs_counts) ids.insert(id);

  const ValueRange range = BenefitRange(v);
  LabelSet out;
  for (std::uint32_t id : ids) {
    CellCounts c;
    if (auto it = exp_counts.find(id); it != exp_counts.end()) {
      c.exp_treated = it->second.exp_treated;
      c.exp_treated_y1 = it->second.exp_treated_y1;
      c.exp_control = it->second.exp_control;
      c.exp_control_y1 = it->second.exp_control_y1;
    }
    if (auto it = obs_counts.find(id); it != obs_counts.end()) {
      c.obs_xy = it->second.obs_xy;
      c.obs_xyp = it->second.obs_xyp;
      c.obs_xpy = it->second.obs_xpy;
      c.obs_xpyp = it->second.obs_xpyp;
    }
    const std::uint64_t n_exp = c.n_exp();
    const std::uint64_t n_obs = c.n_obs();
    if (n_exp < threshold || n_obs < threshold) {
      out.dropped.push_back({id, DropReason::kBelowThreshold, n_exp, n_obs});
      continue;
    }
    CellEstimate est;
    try {
      est = Estimate(c);
    } catch (const IneligibleCellError&) {
      out.dropped.push_back({id, DropReason::kZeroArm, n_exp, n_obs});
      continue;
    }
    const BoundsBreakdown b = ComputeBenefitBounds(v, est.exp, est.obs);
    if (!b.consistent) {
      out.dropped.push_back({id, DropReason::kInconsistent, n_exp, n_obs});
      continue;
    }
    LabeledCell cell;
    cell.cell = CellKey(id, n_observed);
    cell.lower_label = range.Clamp(b.lower);
    cell.upper_label = range.Clamp(b.upper);
    // Within the slack a consistent pair can cross by ~1e-12.
    if (cell.lower_label > cell.upper_label) {
      cell.upper_label = cell.lower_label;
    }
    cell.n_exp = n_exp;
    cell.n_obs = n_obs;
    cell.consistent = true;
    out.labels.push_back(cell);
  }
  return out;
}

LabelSplit SplitLabels(std::vector<LabeledCell> labeled,
                       const SplitSpec& spec) {
  if (labeled.empty()) throw ValidationError("cannot split an empty label set");
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw ValidationError("test_fraction must lie in (0,1)");
  }
  CounterRng rng(spec.seed);
  Shuffle(labeled.begin(), labeled.end(), rng);
  const auto n = static_cast<double>(labeled.size());
  const auto n_test = static_cast<std::size_t>(
      std::ceil(spec.test_fraction * n - 1e-9));
  LabelSplit split;
  split.test.assign(labeled.begin(), labeled.begin() + n_test);
  split.train.assign(labeled.begin() + n_test, labeled.end());
  auto by_id = [](const LabeledCell& a, const LabeledCell& b) {
    return a.cell.id() < b.cell.id();
  };
  std::sort(split.test.begin(), split.test.end(), by_id);
  std::sort(split.train.begin(), split.train.end(), by_id);
  return split;
}

}  // namespace unitsel
