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

#include "unitsel/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "json.hpp"
#include "unitsel/errors.h"
#include "unitsel/io.h"

namespace unitsel {
namespace {

std::string JoinPath(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

DatasetMeta LoadCheckedMeta(const std::string& dataset_path, Regime expected,
                            const std::string& fingerprint, int n_observed) {
  const DatasetMeta meta = MetaFromJson(ReadFile(MetaPathFor(dataset_path)));
  if (meta.kind != expected) {
    throw ValidationError(dataset_path + " holds " + RegimeName(meta.kind) +
                          " samples, expected " + RegimeName(expected));
  }
  if (meta.config_fingerprint != fingerprint) {
    throw ValidationError(dataset_path + " was generated from config " +
                          meta.config_fingerprint + ", not " + fingerprint);
  }
  if (meta.n_observed != n_observed) {
    throw ValidationError(dataset_path + " has a different n_observed");
  }
  return meta;
}

void SplitLabelColumns(const std::vector<LabeledCell>& labels,
                       FeatureMatrix& features, std::vector<double>& lower,
                       std::vector<double>& upper) {
  for (const LabeledCell& l : labels) {
    features.push_back(l.cell.bits());
    lower.push_back(l.lower_label);
    upper.push_back(l.upper_label);
  }
}

}  // namespace

SelectionPolicy SelectionPolicy::Parse(std::string_view mode, std::size_t k) {
  SelectionPolicy p;
  p.k = k;
  if (mode == "lower_positive") {
    p.mode = Mode::kLowerPositive;
  } else if (mode == "top_k_lower") {
    p.mode = Mode::kTopKLower;
  } else if (mode == "top_k_midpoint") {
    p.mode = Mode::kTopKMidpoint;
  } else {
    throw ValidationError("unknown selection mode '" + std::string(mode) + "'");
  }
  if (p.mode != Mode::kLowerPositive && k < 1) {
    throw ValidationError("top-k selection needs k >= 1");
  }
  return p;
}

std::vector<PredictionRow> SelectCells(std::span<const PredictionRow> preds,
                                       const SelectionPolicy& policy) {
  auto by_lower = [](const PredictionRow& a, const PredictionRow& b) {
    if (a.pred_lower != b.pred_lower) return a.pred_lower > b.pred_lower;
    return a.cell_id < b.cell_id;
  };
  std::vector<PredictionRow> rows(preds.begin(), preds.end());
  switch (policy.mode) {
    case SelectionPolicy::Mode::kLowerPositive:
      std::erase_if(rows, [](const PredictionRow& r) { return !(r.pred_lower > 0.0); });
      break;
    case SelectionPolicy::Mode::kTopKLower:
      std::sort(rows.begin(), rows.end(), by_lower);
      if (rows.size() > policy.k) rows.resize(policy.k);
      break;
    case SelectionPolicy::Mode::kTopKMidpoint: {
      std::sort(rows.begin(), rows.end(),
                [](const PredictionRow& a, const PredictionRow& b) {
                  const double ma = a.pred_lower + a.pred_upper;
                  const double mb = b.pred_lower + b.pred_upper;
                  if (ma != mb) return ma > mb;
                  return a.cell_id < b.cell_id;
                });
      if (rows.size() > policy.k) rows.resize(policy.k);
      break;
    }
  }
  std::sort(rows.begin(), rows.end(), by_lower);
  return rows;
}

std::vector<ReportRow> BuildReport(std::span<const PredictionRow> preds,
                                   std::span<const InformerRecord> truth,
                                   std::size_t sample_n, std::uint64_t seed) {
  if (preds.size() != truth.size()) {
    throw ValidationError("predictions and informer cover different cell spaces");
  }
  std::vector<ReportRow> rows;
  for (std::uint32_t id : SampleCellIds(preds.size(), sample_n, seed)) {
    if (preds[id].cell_id != id || truth[id].cell.id() != id) {
      throw ValidationError("tables must list every cell id in ascending order");
    }
    rows.push_back({id, truth[id].true_lower, preds[id].pred_lower,
                    truth[id].true_upper, preds[id].pred_upper});
  }
  return rows;
}

std::string ReportToCsv(const std::vector<ReportRow>& rows) {
  std::string out = "cell_id,true_lower,pred_lower,true_upper,pred_upper\n";
  char buf[160];
  for (const ReportRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%u,%.12g,%.12g,%.12g,%.12g\n", r.cell_id,
                  r.true_lower, r.pred_lower, r.true_upper, r.pred_upper);
    out += buf;
  }
  return out;
}

std::string SelectionToCsv(const std::vector<PredictionRow>& rows) {
  std::string out = "rank,cell_id,pred_lower,pred_upper\n";
  char buf[128];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%u,%.17g,%.17g\n", i + 1,
                  rows[i].cell_id, rows[i].pred_lower, rows[i].pred_upper);
    out += buf;
  }
  return out;
}

std::string MetricsToJson(const Metrics& metrics) {
  nlohmann::ordered_json j;
  j["mae_lower"] = metrics.mae_lower;
  j["mae_upper"] = metrics.mae_upper;
  j["n"] = metrics.n;
  j["seed"] = metrics.seed;
  j["reference_mae_lower"] = kReferenceMaeLower;
  j["reference_mae_upper"] = kReferenceMaeUpper;
  return j.dump(2) + "\n";
}

DatasetMeta CmdSimulate(const SimulateArgs& args) {
  const std::string config_bytes = ReadFile(args.config_path);
  const ScmConfig config = ConfigFromJson(config_bytes);
  const std::vector<Sample> samples =
      Generate(args.kind, args.n, args.seed, config, args.threads);
  DatasetMeta meta;
  meta.kind = args.kind;
  meta.n = args.n;
  meta.seed = args.seed;
  meta.config_fingerprint = Fingerprint(config_bytes);
  meta.n_observed = config.n_observed;
  meta.format = IsBinaryDatasetPath(args.out) ? "bin" : "csv";
  WriteSamples(args.out, samples, config.n_observed);
  WriteFile(MetaPathFor(args.out), MetaToJson(meta));
  return meta;
}

std::size_t CmdInformer(const std::string& config_path, const BenefitVector& v,
                        const std::string& out) {
  const ScmConfig config = LoadConfig(config_path);
  const std::vector<InformerRecord> table = InformerTable(config, v);
  WriteFile(out, InformerToCsv(table));
  return table.size();
}

LabelSummary CmdLabel(const LabelArgs& args) {
  const std::string config_bytes = ReadFile(args.config_path);
  const ScmConfig config = ConfigFromJson(config_bytes);
  const std::string fingerprint = Fingerprint(config_bytes);
  LoadCheckedMeta(args.exp_path, Regime::kExperimental, fingerprint,
                  config.n_observed);
  LoadCheckedMeta(args.obs_path, Regime::kObservational, fingerprint,
                  config.n_observed);
  if (!(args.test_fraction > 0.0 && args.test_fraction < 1.0)) {
    throw ValidationError("split fraction must lie in (0,1)");
  }

  const CountMap exp_counts =
      Aggregate(ReadSamples(args.exp_path, config.n_observed),
                Regime::kExperimental, config.n_observed);
  const CountMap obs_counts =
      Aggregate(ReadSamples(args.obs_path, config.n_observed),
                Regime::kObservational, config.n_observed);
  const LabelSet labels = BuildLabels(exp_counts, obs_counts, args.v,
                                      config.n_observed, args.threshold);

  LabelSplit split;
  if (!labels.labels.empty()) {
    split = SplitLabels(labels.labels, {args.test_fraction, args.seed});
  }

  EnsureDirectory(args.out_dir);
  WriteFile(JoinPath(args.out_dir, "train.csv"),
            LabelsToCsv(split.train, config.n_observed));
  WriteFile(JoinPath(args.out_dir, "test.csv"),
            LabelsToCsv(split.test, config.n_observed));
  WriteFile(JoinPath(args.out_dir, "drops.csv"), DropLogToCsv(labels.dropped));

  LabelSummary s;
  s.n_eligible = labels.labels.size();
  s.n_train = split.train.size();
  s.n_test = split.test.size();
  s.n_below_threshold = labels.CountDropped(DropReason::kBelowThreshold);
  s.n_inconsistent = labels.CountDropped(DropReason::kInconsistent);
  s.n_zero_arm = labels.CountDropped(DropReason::kZeroArm);

  nlohmann::ordered_json j;
  j["threshold"] = args.threshold;
  j["benefit_vector"] = args.v.ToString();
  j["test_fraction"] = args.test_fraction;
  j["seed"] = args.seed;
  j["n_labeled"] = s.n_eligible;
  j["n_train"] = s.n_train;
  j["n_test"] = s.n_test;
  j["dropped"] = {{"BELOW_THRESHOLD", s.n_below_threshold},
                  {"INCONSISTENT", s.n_inconsistent},
                  {"ZERO_ARM", s.n_zero_arm}};
  WriteFile(JoinPath(args.out_dir, "summary.json"), j.dump(2) + "\n");
  return s;
}

TrainSummary CmdTrain(const TrainArgs& args) {
  const std::vector<LabeledCell> labels = LabelsFromCsv(ReadFile(args.train_path));
  if (labels.empty()) throw ValidationError(args.train_path + " has no labels");
  FeatureMatrix features;
  std::vector<double> lower;
  std::vector<double> upper;
  SplitLabelColumns(labels, features, lower, upper);

  Hyperparams hp_upper = args.hp;
  hp_upper.seed = args.hp.seed + 1;
  const Mlp model_lower = Train(features, lower, args.hp);
  const Mlp model_upper = Train(features, upper, hp_upper);

  EnsureDirectory(args.out_dir);
  WriteFile(JoinPath(args.out_dir, "model_lower.json"), MlpToJson(model_lower));
  WriteFile(JoinPath(args.out_dir, "model_upper.json"), MlpToJson(model_upper));
  return {labels.size(), model_lower.loss_history.back(),
          model_upper.loss_history.back()};
}

std::size_t CmdPredict(const std::string& model_lower_path,
                       const std::string& model_upper_path,
                       const BenefitVector& v, const std::string& out) {
  const Mlp lower = MlpFromJson(ReadFile(model_lower_path));
  const Mlp upper = MlpFromJson(ReadFile(model_upper_path));
  if (lower.input_dim != upper.input_dim) {
    throw ValidationError("lower and upper models have different input widths");
  }
  const std::vector<PredictionRow> rows =
      PredictAll(lower, upper, lower.input_dim, v);
  WriteFile(out, PredictionsToCsv(rows));
  return rows.size();
}

Metrics CmdEvaluate(const std::string& predictions_path,
                    const std::string& informer_path, std::size_t sample_n,
                    std::uint64_t seed, const std::string& out) {
  const auto preds = PredictionsFromCsv(ReadFile(predictions_path));
  const auto truth = InformerFromCsv(ReadFile(informer_path));
  const Metrics m = Evaluate(preds, truth, sample_n, seed);
  WriteFile(out, MetricsToJson(m));
  return m;
}

std::size_t CmdSelect(const std::string& predictions_path,
                      const SelectionPolicy& policy, const std::string& out) {
  const auto preds = PredictionsFromCsv(ReadFile(predictions_path));
  const auto selected = SelectCells(preds, policy);
  WriteFile(out, SelectionToCsv(selected));
  return selected.size();
}

std::size_t CmdReport(const std::string& predictions_path,
                      const std::string& informer_path, std::size_t sample_n,
                      std::uint64_t seed, const std::string& out) {
  const auto preds = PredictionsFromCsv(ReadFile(predictions_path));
  const auto truth = InformerFromCsv(ReadFile(informer_path));
  const auto rows = BuildReport(preds, truth, sample_n, seed);
  WriteFile(out, ReportToCsv(rows));
  return rows.size();
}

}  // namespace unitsel
