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

#ifndef UNITSEL_IO_H_
#define UNITSEL_IO_H_

#include <string>
#include <vector>

#include "unitsel/cells.h"
#include "unitsel/datagen.h"
#include "unitsel/informer.h"
#include "unitsel/learner.h"

namespace unitsel {

// All readers throw IoError for unreadable files and ValidationError for
// malformed content. Writers throw IoError.

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

// Datasets. A path ending in ".bin" uses the packed little-endian 32-bit
// word form, anything else the CSV form with header z1..zn,x,y.
bool IsBinaryDatasetPath(const std::string& path);
void WriteSamples(const std::string& path, const std::vector<Sample>& samples,
                  int n_observed);
std::vector<Sample> ReadSamples(const std::string& path, int n_observed);

// Sidecar next to a dataset: "<dataset path>.meta.json".
std::string MetaPathFor(const std::string& dataset_path);
std::string MetaToJson(const DatasetMeta& meta);
DatasetMeta MetaFromJson(const std::string& text);

// cell_id,p_y_do_x,p_y_do_xp,p_xy,p_xyp,p_xpy,p_xpyp,true_f,true_lower,
// true_upper with 12 significant digits.
std::string InformerToCsv(const std::vector<InformerRecord>& table);
// Row count must be a power of two; it fixes n_observed.
std::vector<InformerRecord> InformerFromCsv(const std::string& text);

// cell_id,z1..zn,lower_label,upper_label,n_exp,n_obs
std::string LabelsToCsv(const std::vector<LabeledCell>& labels,
                        int n_observed);
// n_observed is taken from the header.
std::vector<LabeledCell> LabelsFromCsv(const std::string& text);

// cell_id,reason,n_exp,n_obs
std::string DropLogToCsv(const std::vector<DroppedCell>& dropped);

// cell_id,pred_lower,pred_upper,repaired
std::string PredictionsToCsv(const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> PredictionsFromCsv(const std::string& text);

}  // namespace unitsel

#endif  // UNITSEL_IO_H_
