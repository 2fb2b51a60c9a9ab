// Copyright 2026 The amptrans Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "amptrans/analysis.hpp"
#include "amptrans/baselines.hpp"
#include "amptrans/errors.hpp"
#include "amptrans/transduce.hpp"

namespace amptrans::io {

/// Reads "index,alpha" records. Blank lines, '#' comments and a header line
/// whose first field is not a number are skipped. Every index in [0, N) must
/// appear exactly once.
inline std::vector<double> read_alphas_csv(std::istream& in) {
  std::vector<std::pair<std::size_t, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected index,alpha");
    const std::string first = line.substr(0, comma), second = line.substr(comma + 1);
    const bool header_allowed = std::exchange(first_record, false);
    std::size_t index = 0;
    double alpha = 0;
    try {
      index = std::stoul(first);
      alpha = std::stod(second);
    } catch (const std::exception&) {
      if (header_allowed) continue;
      throw ConfigError("line " + std::to_string(line_no) + ": cannot parse '" + line + "'");
    }
    rows.emplace_back(index, alpha);
  }
  std::vector<double> alphas(rows.size(), std::nan(""));
  for (const auto& [index, alpha] : rows) {
    if (index >= alphas.size() || !std::isnan(alphas[index]))
      throw ConfigError("alpha indices must cover 0..N-1 exactly once");
    alphas[index] = alpha;
  }
  return alphas;
}

/// Reads a JSON array of numbers, or an object with such an array under "alphas".
inline std::vector<double> read_alphas_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("alphas")) j = j["alphas"];
  if (!j.is_array()) throw ConfigError("expected a JSON array of alpha values");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("alpha values must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

/// Dispatches on the extension: ".json" is JSON, anything else CSV.
inline std::vector<double> read_alphas(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? read_alphas_json(in) : read_alphas_csv(in);
}

inline nlohmann::json to_json(const TransductionPlan& plan) {
  return {{"gamma", plan.gamma}, {"d", plan.d}, {"variant", to_string(plan.variant)}, {"angles", plan.angles}};
}

inline TransductionPlan plan_from_json(const nlohmann::json& j) {
  auto plan = TransductionPlan::make(j.at("gamma").get<double>(), j.at("d").get<std::size_t>(),
                                     parse_variant(j.at("variant").get<std::string>()));
  return plan;
}

inline nlohmann::json to_json(const AmplitudeTable& table) {
  return {{"gamma", table.gamma}, {"d", table.d}, {"cutoff_eps", table.cutoff_eps}, {"lambdas", table.lambdas}};
}

inline nlohmann::json to_json(const SynthesisDiagnostics& d) {
  nlohmann::json j{{"qubits", d.qubits},
                   {"d", d.d},
                   {"u_sq", d.u_sq},
                   {"u_sq_oracle", d.u_sq_oracle},
                   {"nu", d.nu},
                   {"a_prime_sq", d.a_prime_sq},
                   {"a_prime_sq_measured", d.a_prime_sq_measured},
                   {"shots", d.shots}};
  j["efficiency"] = std::isnan(d.efficiency) ? nlohmann::json(nullptr) : nlohmann::json(d.efficiency);
  if (std::isnan(d.u_sq_oracle)) j["u_sq_oracle"] = nullptr;
  return j;
}

inline nlohmann::json to_json(const NormReport& r) {
  return {{"method", r.method},     {"d", r.d}, {"norm", r.norm}, {"ancilla_qubits", r.ancilla_qubits},
          {"total_qubits", r.total_qubits}, {"simulated", r.simulated}};
}

/// Shortest text that round-trips the double.
inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  double back = 0;
  for (int p = 6; p <= 17; ++p) {
    std::ostringstream t;
    t.precision(p);
    t << v;
    std::istringstream(t.str()) >> back;
    if (back == v) return t.str();
  }
  return os.str();
}

}  // namespace amptrans::io
