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

#include "unitsel/io.h"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "unitsel/errors.h"

namespace unitsel {
namespace {

void AppendNumber(std::string& out, double v, int digits) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  out.append(buf, static_cast<std::size_t>(len));
}

void AppendUint(std::string& out, std::uint64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

double ParseDouble(std::string_view field) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ValidationError("bad number '" + std::string(field) + "'");
  }
  return v;
}

std::uint64_t ParseUint(std::string_view field) {
  std::uint64_t v = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ValidationError("bad integer '" + std::string(field) + "'");
  }
  return v;
}

Bit ParseBit(std::string_view field) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw ValidationError("bad bit '" + std::string(field) + "'");
}

void ExpectHeader(std::string_view got, const std::string& want) {
  if (got != want) {
    throw ValidationError("unexpected CSV header '" + std::string(got) +
                          "', want '" + want + "'");
  }
}

std::string SampleHeader(int n_observed) {
  std::string h;
  for (int i = 1; i <= n_observed; ++i) {
    h += 'z';
    h += std::to_string(i);
    h += ',';
  }
  return h + "x,y";
}

constexpr char kInformerHeader[] =
    "cell_id,p_y_do_x,p_y_do_xp,p_xy,p_xyp,p_xpy,p_xpyp,true_f,true_lower,"
    "true_upper";
constexpr char kPredictionsHeader[] = "cell_id,pred_lower,pred_upper,repaired";
constexpr int kInformerDigits = 12;
constexpr int kRoundTripDigits = 17;

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing " + path);
}

bool IsBinaryDatasetPath(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
}

void WriteSamples(const std::string& path, const std::vector<Sample>& samples,
                  int n_observed) {
  std::string out;
  if (IsBinaryDatasetPath(path)) {
    out.reserve(samples.size() * 4);
    for (const Sample& s : samples) {
      const std::uint32_t w = PackSample(s);
      for (int b = 0; b < 4; ++b) {
        out.push_back(static_cast<char>((w >> (8 * b)) & 0xffu));
      }
    }
  } else {
    out.reserve(samples.size() * static_cast<std::size_t>(2 * n_observed + 5));
    out += SampleHeader(n_observed);
    out += '\n';
    for (const Sample& s : samples) {
      for (int i = 0; i < n_observed; ++i) {
        out += ((s.z >> i) & 1u) ? '1' : '0';
        out += ',';
      }
      out += s.x ? '1' : '0';
      out += ',';
      out += s.y ? '1' : '0';
      out += '\n';
    }
  }
  WriteFile(path, out);
}

std::vector<Sample> ReadSamples(const std::string& path, int n_observed) {
  const std::string text = ReadFile(path);
  std::vector<Sample> samples;
  const std::uint32_t limit = std::uint32_t{1} << n_observed;
  if (IsBinaryDatasetPath(path)) {
    if (text.size() % 4 != 0) {
      throw ValidationError(path + " is not a whole number of 32-bit words");
    }
    samples.reserve(text.size() / 4);
    for (std::size_t i = 0; i < text.size(); i += 4) {
      std::uint32_t w = 0;
      for (int b = 0; b < 4; ++b) {
        w |= static_cast<std::uint32_t>(static_cast<unsigned char>(text[i + b]))
             << (8 * b);
      }
      const Sample s = UnpackSample(w);
      if (s.z >= limit) {
        throw ValidationError(path + " has bits beyond n_observed");
      }
      samples.push_back(s);
    }
    return samples;
  }
  const auto lines = SplitLines(text);
  if (lines.empty()) throw ValidationError(path + " has no header");
  ExpectHeader(lines[0], SampleHeader(n_observed));
  const std::size_t width = static_cast<std::size_t>(2 * (n_observed + 2) - 1);
  samples.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string_view line = lines[r];
    if (line.size() != width) {
      throw ValidationError(path + ": malformed row " + std::to_string(r + 1));
    }
    Sample s;
    for (int i = 0; i < n_observed; ++i) {
      s.z |= static_cast<std::uint32_t>(ParseBit(line.substr(2 * i, 1))) << i;
    }
    s.x = ParseBit(line.substr(2 * n_observed, 1));
    s.y = ParseBit(line.substr(2 * n_observed + 2, 1));
    samples.push_back(s);
  }
  return samples;
}

std::string MetaPathFor(const std::string& dataset_path) {
  return dataset_path + ".meta.json";
}

std::string MetaToJson(const DatasetMeta& meta) {
  nlohmann::ordered_json j;
  j["kind"] = RegimeName(meta.kind);
  j["n"] = meta.n;
  j["seed"] = meta.seed;
  j["config_fingerprint"] = meta.config_fingerprint;
  j["n_observed"] = meta.n_observed;
  j["format"] = meta.format;
  return j.dump(2) + "\n";
}

DatasetMeta MetaFromJson(const std::string& text) {
  DatasetMeta meta;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    meta.kind = ParseRegime(j.at("kind").get<std::string>());
    meta.n = j.at("n").get<std::uint64_t>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    meta.n_observed = j.at("n_observed").get<int>();
    meta.format = j.value("format", std::string("csv"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad dataset meta: ") + e.what());
  }
  return meta;
}

std::string InformerToCsv(const std::vector<InformerRecord>& table) {
  std::string out = kInformerHeader;
  out += '\n';
  for (const InformerRecord& r : table) {
    AppendUint(out, r.cell.id());
    for (double v : {r.exp.p_y_do_x, r.exp.p_y_do_xp, r.obs.p_xy, r.obs.p_xyp,
                     r.obs.p_xpy, r.obs.p_xpyp, r.true_f, r.true_lower,
                     r.true_upper}) {
      out += ',';
      AppendNumber(out, v, kInformerDigits);
    }
    out += '\n';
  }
  return out;
}

std::vector<InformerRecord> InformerFromCsv(const std::string& text) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw ValidationError("informer file has no header");
  ExpectHeader(lines[0], kInformerHeader);
  const std::size_t n_rows = lines.size() - 1;
  if (n_rows < 2 || !std::has_single_bit(n_rows)) {
    throw ValidationError("informer row count must be a power of two >= 2");
  }
  const int n_observed = std::countr_zero(n_rows);
  std::vector<InformerRecord> table;
  table.reserve(n_rows);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = SplitFields(lines[r]);
    if (f.size() != 10) throw ValidationError("informer row has wrong width");
    InformerRecord rec;
    rec.cell = CellKey(static_cast<std::uint32_t>(ParseUint(f[0])), n_observed);
    rec.exp = {ParseDouble(f[1]), ParseDouble(f[2])};
    rec.obs = {ParseDouble(f[3]), ParseDouble(f[4]), ParseDouble(f[5]),
               ParseDouble(f[6])};
    rec.true_f = ParseDouble(f[7]);
    rec.true_lower = ParseDouble(f[8]);
    rec.true_upper = ParseDouble(f[9]);
    table.push_back(rec);
  }
  return table;
}

std::string LabelsToCsv(const std::vector<LabeledCell>& labels,
                        int n_observed) {
  std::string out = "cell_id,";
  for (int i = 1; i <= n_observed; ++i) out += "z" + std::to_string(i) + ",";
  out += "lower_label,upper_label,n_exp,n_obs\n";
  for (const LabeledCell& l : labels) {
    AppendUint(out, l.cell.id());
    for (int i = 0; i < n_observed; ++i) {
      out += ',';
      out += l.cell.bit(i) ? '1' : '0';
    }
    out += ',';
    AppendNumber(out, l.lower_label, kRoundTripDigits);
    out += ',';
    AppendNumber(out, l.upper_label, kRoundTripDigits);
    out += ',';
    AppendUint(out, l.n_exp);
    out += ',';
    AppendUint(out, l.n_obs);
    out += '\n';
  }
  return out;
}

std::vector<LabeledCell> LabelsFromCsv(const std::string& text) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw ValidationError("labels file has no header");
  const auto header = SplitFields(lines[0]);
  if (header.size() < 6) throw ValidationError("labels header too short");
  const int n_observed = static_cast<int>(header.size()) - 5;
  std::string want = "cell_id,";
  for (int i = 1; i <= n_observed; ++i) want += "z" + std::to_string(i) + ",";
  want += "lower_label,upper_label,n_exp,n_obs";
  ExpectHeader(lines[0], want);
  std::vector<LabeledCell> labels;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = SplitFields(lines[r]);
    if (f.size() != header.size()) {
      throw ValidationError("labels row has wrong width");
    }
    LabeledCell l;
    l.cell = CellKey(static_cast<std::uint32_t>(ParseUint(f[0])), n_observed);
    for (int i = 0; i < n_observed; ++i) {
      if (ParseBit(f[1 + i]) != l.cell.bit(i)) {
        throw ValidationError("labels row bits disagree with cell_id");
      }
    }
    l.lower_label = ParseDouble(f[1 + n_observed]);
    l.upper_label = ParseDouble(f[2 + n_observed]);
    l.n_exp = ParseUint(f[3 + n_observed]);
    l.n_obs = ParseUint(f[4 + n_observed]);
    l.consistent = true;
    labels.push_back(l);
  }
  return labels;
}

std::string DropLogToCsv(const std::vector<DroppedCell>& dropped) {
  std::string out = "cell_id,reason,n_exp,n_obs\n";
  for (const DroppedCell& d : dropped) {
    AppendUint(out, d.cell_id);
    out += ',';
    out += DropReasonName(d.reason);
    out += ',';
    AppendUint(out, d.n_exp);
    out += ',';
    AppendUint(out, d.n_obs);
    out += '\n';
  }
  return out;
}

std::string PredictionsToCsv(const std::vector<PredictionRow>& rows) {
  std::string out = kPredictionsHeader;
  out += '\n';
  for (const PredictionRow& r : rows) {
    AppendUint(out, r.cell_id);
    out += ',';
    AppendNumber(out, r.pred_lower, kRoundTripDigits);
    out += ',';
    AppendNumber(out, r.pred_upper, kRoundTripDigits);
    out += r.repaired ? ",1\n" : ",0\n";
  }
  return out;
}

std::vector<PredictionRow> PredictionsFromCsv(const std::string& text) {
  const auto lines = SplitLines(text);
  if (lines.empty()) throw ValidationError("predictions file has no header");
  ExpectHeader(lines[0], kPredictionsHeader);
  std::vector<PredictionRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto f = SplitFields(lines[r]);
    if (f.size() != 4) throw ValidationError("predictions row has wrong width");
    PredictionRow row;
    row.cell_id = static_cast<std::uint32_t>(ParseUint(f[0]));
    row.pred_lower = ParseDouble(f[1]);
    row.pred_upper = ParseDouble(f[2]);
    row.repaired = ParseBit(f[3]) == 1;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace unitsel
