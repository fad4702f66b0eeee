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

#include "unitsel/model.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "unitsel/errors.h"
#include "unitsel/rng.h"

namespace unitsel {
namespace {

void CheckProbability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0,1], got " +
                      std::to_string(p));
  }
}

void CheckFinite(std::span<const double> values, const char* name) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ConfigError(std::string(name) + " contains a non-finite entry");
    }
  }
}

}  // namespace

void ScmConfig::Validate() const {
  if (n_observed < 1) throw ConfigError("n_observed must be at least 1");
  if (n_observed > kMaxObserved) {
    throw ConfigError("n_observed must be at most " +
                      std::to_string(kMaxObserved));
  }
  if (n_unobserved < 0) throw ConfigError("n_unobserved must be nonnegative");
  if (n_unobserved > 24) throw ConfigError("n_unobserved must be at most 24");
  const auto n = static_cast<std::size_t>(n_total());
  if (weights_x.size() != n) throw ConfigError("weights_x length mismatch");
  if (weights_y.size() != n) throw ConfigError("weights_y length mismatch");
  if (bern_z.size() != n) throw ConfigError("bern_z length mismatch");
  CheckFinite(weights_x, "weights_x");
  CheckFinite(weights_y, "weights_y");
  if (!std::isfinite(constant_c)) throw ConfigError("constant_c not finite");
  for (double p : bern_z) CheckProbability(p, "bern_z");
  CheckProbability(bern_ux, "bern_ux");
  CheckProbability(bern_uy, "bern_uy");
  CheckProbability(experiment_assign_prob, "experiment_assign_prob");
}

ScmConfig DefaultConfig() {
  ScmConfig c;
  c.n_observed = 15;
  c.n_unobserved = 5;
  c.weights_x = {
      0.843870221861,  0.178759296447,  -0.372349746729, -0.950904544846,
      -0.439457721339, -0.725970103834, -0.791203963585, -0.843183562918,
      -0.68422616618,  -0.782051030131, -0.434420454146, -0.445019418094,
      0.751698021555,  -0.185984172192, 0.191948271392,  0.401334543567,
      0.331387702568,  0.522595634402,  -0.928734581669, 0.203436441511};
  c.weights_y = {
      -0.453251661832, 0.424563325534,  0.0924810605305, 0.312680246141,
      0.7676961338,    0.124337421843,  -0.435341306455, 0.248957751703,
      -0.161303883519, -0.537653062121, -0.222087991408, 0.190167775134,
      -0.788147770713, -0.593030174012, -0.308066297974, 0.218776507777,
      -0.751253645088, -0.11151455376,  0.785227235182,  -0.568046522383};
  c.constant_c = 0.975140894243;
  c.bern_z = {
      0.524110233482, 0.689566064108, 0.180145428970, 0.317153536644,
      0.046268153873, 0.340145244411, 0.100912238566, 0.772038172066,
      0.913108434869, 0.364272299067, 0.063667554704, 0.454839320009,
      0.586687215140, 0.018824647595, 0.871017316787, 0.164966968157,
      0.578925020078, 0.983082980658, 0.018033993991, 0.074629121266};
  c.bern_ux = 0.29908139311;
  c.bern_uy = 0.9226108109253;
  c.experiment_assign_prob = 0.5;
  return c;
}

ScmConfig RandomConfig(int n_observed, int n_unobserved, std::uint64_t seed) {
  ScmConfig c;
  c.n_observed = n_observed;
  c.n_unobserved = n_unobserved;
  CounterRng rng(seed);
  const int n = n_observed + n_unobserved;
  for (int i = 0; i < n; ++i) c.weights_x.push_back(rng.UniformRange(-1, 1));
  for (int i = 0; i < n; ++i) c.weights_y.push_back(rng.UniformRange(-1, 1));
  c.constant_c = rng.UniformRange(-1, 1);
  for (int i = 0; i < n; ++i) c.bern_z.push_back(rng.Uniform());
  c.bern_ux = rng.Uniform();
  c.bern_uy = rng.Uniform();
  c.experiment_assign_prob = 0.5;
  c.Validate();
  return c;
}

ScmConfig ConfigFromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ScmConfig c;
  try {
    c.n_observed = j.at("n_observed").get<int>();
    c.n_unobserved = j.at("n_unobserved").get<int>();
    c.weights_x = j.at("weights_x").get<std::vector<double>>();
    c.weights_y = j.at("weights_y").get<std::vector<double>>();
    c.constant_c = j.at("constant_c").get<double>();
    c.bern_z = j.at("bern_z").get<std::vector<double>>();
    c.bern_ux = j.at("bern_ux").get<double>();
    c.bern_uy = j.at("bern_uy").get<double>();
    c.experiment_assign_prob = j.value("experiment_assign_prob", 0.5);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string ConfigToJson(const ScmConfig& config) {
  nlohmann::ordered_json j;
  j["n_observed"] = config.n_observed;
  j["n_unobserved"] = config.n_unobserved;
  j["weights_x"] = config.weights_x;
  j["weights_y"] = config.weights_y;
  j["constant_c"] = config.constant_c;
  j["bern_z"] = config.bern_z;
  j["bern_ux"] = config.bern_ux;
  j["bern_uy"] = config.bern_uy;
  j["experiment_assign_prob"] = config.experiment_assign_prob;
  return j.dump(2) + "\n";
}

ScmConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ConfigFromJson(buf.str());
}

CellKey::CellKey(std::uint32_t id, int n_observed)
    : id_(id), n_observed_(n_observed) {
  if (n_observed < 1 || n_observed > kMaxObserved) {
    throw ValidationError("cell width out of range");
  }
  if ((static_cast<std::uint64_t>(id) >> n_observed) != 0) {
    throw ValidationError("cell id " + std::to_string(id) +
                          " out of range for width " +
                          std::to_string(n_observed));
  }
}

CellKey CellKey::FromBits(std::span<const Bit> bits) {
  std::uint32_t id = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw ValidationError("cell bits must be 0 or 1");
    id |= static_cast<std::uint32_t>(bits[i]) << i;
  }
  return CellKey(id, static_cast<int>(bits.size()));
}

std::vector<Bit> CellKey::bits() const {
  std::vector<Bit> out(static_cast<std::size_t>(n_observed_));
  for (int i = 0; i < n_observed_; ++i) out[i] = bit(i);
  return out;
}

const char* ResponseTypeName(ResponseType type) {
  switch (type) {
    case ResponseType::kComplier:
      return "complier";
    case ResponseType::kAlwaysTaker:
      return "always-taker";
    case ResponseType::kNeverTaker:
      return "never-taker";
    case ResponseType::kDefier:
      return "defier";
  }
  return "unknown";
}

double MValue(std::span<const Bit> z, std::span<const double> weights) {
  if (z.size() != weights.size()) {
    throw ConfigError("profile length " + std::to_string(z.size()) +
                      " does not match weight length " +
                      std::to_string(weights.size()));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i]) m += weights[i];
  }
  return m;
}

Bit EvalX(double m_x, Bit u_x) { return m_x + u_x > 0.5 ? 1 : 0; }

Bit EvalY(Bit x, double m_y, Bit u_y, double c) {
  const double s = c * x + m_y + u_y;
  return ((s > 0.0 && s < 1.0) || (s > 1.0 && s < 2.0)) ? 1 : 0;
}

CounterfactualPair CounterfactualPairForM(double m_y, Bit u_y, double c) {
  return {EvalY(0, m_y, u_y, c), EvalY(1, m_y, u_y, c)};
}

CounterfactualPair CounterfactualPairFor(const FullProfile& profile, Bit u_y,
                                         const ScmConfig& config) {
  return CounterfactualPairForM(MValue(profile.z, config.weights_y), u_y,
                                config.constant_c);
}

ResponseType ResponseTypeOf(CounterfactualPair pair) {
  if (pair.y_treated) {
    return pair.y_control ? ResponseType::kAlwaysTaker
                          : ResponseType::kComplier;
  }
  return pair.y_control ? ResponseType::kDefier : ResponseType::kNeverTaker;
}

FullProfile ComposeProfile(const CellKey& cell, std::uint32_t completion,
                           int n_unobserved) {
  FullProfile p;
  p.z.resize(static_cast<std::size_t>(cell.n_observed() + n_unobserved));
  for (int i = 0; i < cell.n_observed(); ++i) p.z[i] = cell.bit(i);
  for (int j = 0; j < n_unobserved; ++j) {
    p.z[cell.n_observed() + j] =
        static_cast<Bit>((completion >> (n_unobserved - 1 - j)) & 1u);
  }
  return p;
}

}  // namespace unitsel
