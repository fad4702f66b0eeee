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

#ifndef UNITSEL_PIPELINE_H_
#define UNITSEL_PIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitsel/bounds.h"
#include "unitsel/cells.h"
#include "unitsel/datagen.h"
#include "unitsel/informer.h"
#include "unitsel/learner.h"

namespace unitsel {

// Reference errors reported alongside ours in metrics files.
inline constexpr double kReferenceMaeLower = 0.5652;
inline constexpr double kReferenceMaeUpper = 0.5447;

struct SelectionPolicy {
  enum class Mode { kLowerPositive, kTopKLower, kTopKMidpoint };
  Mode mode = Mode::kLowerPositive;
  std::size_t k = 0;

  // "lower_positive", "top_k_lower" or "top_k_midpoint"; top-k modes need
  // k >= 1.
  static SelectionPolicy Parse(std::string_view mode, std::size_t k);
};

// Cells passing the policy, ordered by pred_lower descending, then cell id
// ascending.
std::vector<PredictionRow> SelectCells(std::span<const PredictionRow> preds,
                                       const SelectionPolicy& policy);

struct ReportRow {
  std::uint32_t cell_id = 0;
  double true_lower = 0.0;
  double pred_lower = 0.0;
  double true_upper = 0.0;
  double pred_upper = 0.0;
};

// Same cells, in the same order, that Evaluate scores for this seed.
std::vector<ReportRow> BuildReport(std::span<const PredictionRow> preds,
                                   std::span<const InformerRecord> truth,
                                   std::size_t sample_n, std::uint64_t seed);

std::string ReportToCsv(const std::vector<ReportRow>& rows);
std::string SelectionToCsv(const std::vector<PredictionRow>& rows);
std::string MetricsToJson(const Metrics& metrics);

// Subcommands. Each is a pure function of its file inputs and arguments.

struct SimulateArgs {
  std::string config_path;
  Regime kind = Regime::kExperimental;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};
// Writes the dataset and its meta sidecar.
DatasetMeta CmdSimulate(const SimulateArgs& args);

std::size_t CmdInformer(const std::string& config_path, const BenefitVector& v,
                        const std::string& out);

struct LabelArgs {
  std::string exp_path;
  std::string obs_path;
  std::string config_path;
  BenefitVector v;
  std::uint64_t threshold = kDefaultLabelThreshold;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct LabelSummary {
  std::size_t n_eligible = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t n_below_threshold = 0;
  std::size_t n_inconsistent = 0;
  std::size_t n_zero_arm = 0;
};

// Writes train.csv, test.csv, drops.csv and summary.json into out_dir.
// Throws ValidationError when a dataset's fingerprint differs from the
// config's.
LabelSummary CmdLabel(const LabelArgs& args);

struct TrainArgs {
  std::string train_path;
  Hyperparams hp;
  std::string out_dir;
};

struct TrainSummary {
  std::size_t n_cells = 0;
  double final_loss_lower = 0.0;
  double final_loss_upper = 0.0;
};

// Writes model_lower.json and model_upper.json. The upper-bound model uses
// seed hp.seed + 1.
TrainSummary CmdTrain(const TrainArgs& args);

std::size_t CmdPredict(const std::string& model_lower_path,
                       const std::string& model_upper_path,
                       const BenefitVector& v, const std::string& out);

Metrics CmdEvaluate(const std::string& predictions_path,
                    const std::string& informer_path, std::size_t sample_n,
                    std::uint64_t seed, const std::string& out);

std::size_t CmdSelect(const std::string& predictions_path,
                      const SelectionPolicy& policy, const std::string& out);

std::size_t CmdReport(const std::string& predictions_path,
                      const std::string& informer_path, std::size_t sample_n,
                      std::uint64_t seed, const std::string& out);

}  // namespace unitsel

#endif  // UNITSEL_PIPELINE_H_
