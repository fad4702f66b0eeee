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

#ifndef UNITSEL_CELLS_H_
#define UNITSEL_CELLS_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "unitsel/bounds.h"
#include "unitsel/datagen.h"
#include "unitsel/model.h"

namespace unitsel {

inline constexpr std::uint64_t kDefaultLabelThreshold = 1300;

struct CellCounts {
  std::uint64_t exp_treated = 0;
  std::uint64_t exp_treated_y1 = 0;
  std::uint64_t exp_control = 0;
  std::uint64_t exp_control_y1 = 0;
  std::uint64_t obs_xy = 0;
  std::uint64_t obs_xyp = 0;
  std::uint64_t obs_xpy = 0;
  std::uint64_t obs_xpyp = 0;

  std::uint64_t n_exp() const { return exp_treated + exp_control; }
  std::uint64_t n_obs() const { return obs_xy + obs_xyp + obs_xpy + obs_xpyp; }

  CellCounts& operator+=(const CellCounts& other);
  friend bool operator==(const CellCounts&, const CellCounts&) = default;
};

// Ordered by cell id; cells never seen are absent.
using CountMap = std::map<std::uint32_t, CellCounts>;

CountMap Aggregate(std::span<const Sample> samples, Regime regime,
                   int n_observed);

// Associative and commutative, so shards can be merged in any order.
void MergeCounts(CountMap& into, const CountMap& from);

struct CellEstimate {
  ExperimentalDistribution exp;
  ObservationalJoint obs;
};

// Raw frequency ratios. Throws IneligibleCellError when an experimental arm
// or the observational total is empty.
CellEstimate Estimate(const CellCounts& counts);

struct LabeledCell {
  CellKey cell{0, 1};
  double lower_label = 0.0;
  double upper_label = 0.0;
  std::uint64_t n_exp = 0;
  std::uint64_t n_obs = 0;
  bool consistent = true;
};

enum class DropReason { kBelowThreshold, kInconsistent, kZeroArm };

const char* DropReasonName(DropReason reason);

struct DroppedCell {
  std::uint32_t cell_id = 0;
  DropReason reason = DropReason::kBelowThreshold;
  std::uint64_t n_exp = 0;
  std::uint64_t n_obs = 0;
};

struct LabelSet {
  std::vector<LabeledCell> labels;
  std::vector<DroppedCell> dropped;

  std::size_t CountDropped(DropReason reason) const;
};

// A cell is eligible when both its experimental and its observational
// sample counts reach `threshold`. Eligible cells whose estimated bounds
// cross (l > u) are dropped as kInconsistent; the rest are labeled with the
// benefit bounds clamped to BenefitRange(v). Both outputs ascend by cell id.
LabelSet BuildLabels(const CountMap& exp_counts, const CountMap& obs_counts,
                     const BenefitVector& v, int n_observed,
                     std::uint64_t threshold = kDefaultLabelThreshold);

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

struct LabelSplit {
  std::vector<LabeledCell> train;
  std::vector<LabeledCell> test;
};

// Seeded shuffle; the first ceil(test_fraction * n) cells go to test. Each
// part is returned sorted by cell id.
LabelSplit SplitLabels(std::vector<LabeledCell> labeled, const SplitSpec& spec);

}  // namespace unitsel

#endif  // UNITSEL_CELLS_H_
