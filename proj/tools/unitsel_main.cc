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

// unitsel: command line driver for the bound-learning pipeline.
//
//   unitsel simulate --config M --kind experimental --n N --seed S --out exp.bin
//   unitsel informer --config M --out informer.csv
//   unitsel label    --exp exp.bin --obs obs.bin --config M --out labels/
//   unitsel train    --train labels/train.csv --out models/
//   unitsel predict  --model-lower .. --model-upper .. --out preds.csv
//   unitsel evaluate --predictions preds.csv --informer informer.csv --out m.json
//   unitsel select   --predictions preds.csv --mode lower_positive --out sel.csv
//   unitsel report   --predictions preds.csv --informer informer.csv --out fig.csv
//
// Exit codes: 0 success, 2 validation error, 3 I/O error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "unitsel/errors.h"
#include "unitsel/pipeline.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace unitsel;

  CLI::App app{"Learn bounds of the unit-selection benefit function"};
  app.require_subcommand(1);

  std::string vector_text = "1,-1,-1,-2";
  auto add_vector = [&vector_text](CLI::App* cmd) {
    cmd->add_option("--vector", vector_text,
                    "Benefit vector beta,gamma,theta,delta")
        ->capture_default_str();
  };

  // simulate
  SimulateArgs sim;
  std::string sim_kind = "experimental";
  auto* simulate = app.add_subcommand("simulate", "Generate a sample dataset");
  simulate->add_option("--config", sim.config_path, "Model config JSON")->required();
  simulate->add_option("--kind", sim_kind, "experimental | observational")
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "Number of samples")->required();
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all)")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "Output .csv or .bin")->required();

  // informer
  std::string inf_config;
  std::string inf_out;
  auto* informer = app.add_subcommand("informer", "Exact per-cell truth table");
  informer->add_option("--config", inf_config, "Model config JSON")->required();
  informer->add_option("--out", inf_out, "Output CSV")->required();
  add_vector(informer);

  // label
  LabelArgs lab;
  auto* label = app.add_subcommand("label", "Build frequentist bound labels");
  label->add_option("--exp", lab.exp_path, "Experimental dataset")->required();
  label->add_option("--obs", lab.obs_path, "Observational dataset")->required();
  label->add_option("--config", lab.config_path, "Model config JSON")->required();
  label->add_option("--threshold", lab.threshold, "Minimum samples per regime")
      ->capture_default_str();
  label->add_option("--split", lab.test_fraction, "Test fraction")
      ->capture_default_str();
  label->add_option("--seed", lab.seed, "Split seed")->capture_default_str();
  label->add_option("--out", lab.out_dir, "Output directory")->required();
  add_vector(label);

  // train
  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train lower and upper bound models");
  train->add_option("--train", tr.train_path, "Training labels CSV")->required();
  train->add_option("--hidden", tr.hp.hidden_width, "Hidden width")
      ->capture_default_str();
  train->add_option("--epochs", tr.hp.epochs, "Epochs")->capture_default_str();
  train->add_option("--lr", tr.hp.learning_rate, "Learning rate")
      ->capture_default_str();
  train->add_option("--batch-size", tr.hp.batch_size, "Batch size (0 = full)")
      ->capture_default_str();
  train->add_option("--seed", tr.hp.seed, "Init seed")->capture_default_str();
  train->add_option("--out", tr.out_dir, "Output directory")->required();

  // predict
  std::string model_lower;
  std::string model_upper;
  std::string pred_out;
  auto* predict = app.add_subcommand("predict", "Predict bounds for every cell");
  predict->add_option("--model-lower", model_lower, "Lower-bound model")->required();
  predict->add_option("--model-upper", model_upper, "Upper-bound model")->required();
  predict->add_option("--out", pred_out, "Output CSV")->required();
  add_vector(predict);

  // evaluate
  std::string eval_preds;
  std::string eval_informer;
  std::string eval_out;
  std::size_t eval_n = kDefaultEvalSample;
  std::uint64_t eval_seed = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Mean absolute error on sampled cells");
  evaluate->add_option("--predictions", eval_preds, "Predictions CSV")->required();
  evaluate->add_option("--informer", eval_informer, "Informer CSV")->required();
  evaluate->add_option("--sample-n", eval_n, "Cells to sample")->capture_default_str();
  evaluate->add_option("--seed", eval_seed, "Sampling seed")->capture_default_str();
  evaluate->add_option("--out", eval_out, "Metrics JSON")->required();

  // select
  std::string sel_preds;
  std::string sel_mode = "lower_positive";
  std::size_t sel_k = 0;
  std::string sel_out;
  auto* select = app.add_subcommand("select", "Select cells by predicted bounds");
  select->add_option("--predictions", sel_preds, "Predictions CSV")->required();
  select->add_option("--mode", sel_mode,
                     "lower_positive | top_k_lower | top_k_midpoint")
      ->capture_default_str();
  select->add_option("--k", sel_k, "k for top-k modes");
  select->add_option("--out", sel_out, "Selection CSV")->required();

  // report
  std::string rep_preds;
  std::string rep_informer;
  std::string rep_out;
  std::size_t rep_n = kDefaultEvalSample;
  std::uint64_t rep_seed = 0;
  auto* report = app.add_subcommand("report", "Plot data: true vs learned bounds");
  report->add_option("--predictions", rep_preds, "Predictions CSV")->required();
  report->add_option("--informer", rep_informer, "Informer CSV")->required();
  report->add_option("--sample-n", rep_n, "Cells to sample")->capture_default_str();
  report->add_option("--seed", rep_seed, "Sampling seed")->capture_default_str();
  report->add_option("--out", rep_out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) {
      sim.kind = ParseRegime(sim_kind);
      const DatasetMeta meta = CmdSimulate(sim);
      std::fprintf(stderr, "wrote %llu %s samples to %s\n",
                   static_cast<unsigned long long>(meta.n), RegimeName(meta.kind),
                   sim.out.c_str());
    } else if (*informer) {
      const std::size_t rows =
          CmdInformer(inf_config, BenefitVector::Parse(vector_text), inf_out);
      std::fprintf(stderr, "wrote %zu informer rows to %s\n", rows, inf_out.c_str());
    } else if (*label) {
      lab.v = BenefitVector::Parse(vector_text);
      const LabelSummary s = CmdLabel(lab);
      std::fprintf(stderr,
                   "labeled %zu cells (%zu train, %zu test); dropped %zu below "
                   "threshold, %zu inconsistent, %zu with an empty arm\n",
                   s.n_eligible, s.n_train, s.n_test, s.n_below_threshold,
                   s.n_inconsistent, s.n_zero_arm);
      if (s.n_eligible == 0) {
        std::fprintf(stderr, "warning: no cell reached the threshold\n");
      }
    } else if (*train) {
      const TrainSummary s = CmdTrain(tr);
      std::fprintf(stderr, "trained on %zu cells; final mse lower %.6g upper %.6g\n",
                   s.n_cells, s.final_loss_lower, s.final_loss_upper);
    } else if (*predict) {
      const std::size_t rows = CmdPredict(model_lower, model_upper,
                                          BenefitVector::Parse(vector_text), pred_out);
      std::fprintf(stderr, "wrote %zu predictions to %s\n", rows, pred_out.c_str());
    } else if (*evaluate) {
      const Metrics m = CmdEvaluate(eval_preds, eval_informer, eval_n, eval_seed, eval_out);
      std::printf("mae_lower %.4f (reference %.4f)\nmae_upper %.4f (reference %.4f)\n",
                  m.mae_lower, kReferenceMaeLower, m.mae_upper, kReferenceMaeUpper);
    } else if (*select) {
      const std::size_t rows =
          CmdSelect(sel_preds, SelectionPolicy::Parse(sel_mode, sel_k), sel_out);
      std::fprintf(stderr, "selected %zu cells\n", rows);
    } else if (*report) {
      const std::size_t rows = CmdReport(rep_preds, rep_informer, rep_n, rep_seed, rep_out);
      std::fprintf(stderr, "wrote %zu report rows to %s\n", rows, rep_out.c_str());
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return 0;
}
