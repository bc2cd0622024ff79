// Copyright 2026 The orsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "orsim/circuit.hpp"
#include "orsim/counts.hpp"

namespace orsim::io {

using nlohmann::json;

/// Malformed or schema-violating input file.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("failed while writing " + path);
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(what + ": " + e.what());
  }
}

namespace detail {

template <class T>
T field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(what + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(what + ": field '" + key + "' has the wrong type");
  }
}

inline std::size_t qubit_key(const std::string& k, const std::string& what) {
  if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
    throw FormatError(what + ": qubit key '" + k + "' is not a non-negative integer");
  return static_cast<std::size_t>(std::stoull(k));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Calibration: {"<q>": {"t1_us": .., "t2_us": .., "timestamp": ".."}}
// ---------------------------------------------------------------------------

inline json calibration_to_json(const std::map<std::size_t, Calibration>& cal) {
  json j = json::object();
  for (const auto& [q, c] : cal) j[std::to_string(q)] = {{"t1_us", c.t1_us}, {"t2_us", c.t2_us}, {"timestamp", c.timestamp}};
  return j;
}

inline std::map<std::size_t, Calibration> calibration_from_json(const json& j, const std::string& what = "calibration") {
  if (!j.is_object()) throw FormatError(what + ": expected an object keyed by qubit");
  std::map<std::size_t, Calibration> out;
  for (const auto& [k, v] : j.items()) {
    const auto ctx = what + "[" + k + "]";
    Calibration c;
    c.t1_us = detail::field<double>(v, "t1_us", ctx);
    c.t2_us = detail::field<double>(v, "t2_us", ctx);
    c.timestamp = v.contains("timestamp") ? detail::field<std::string>(v, "timestamp", ctx) : "";
    if (!(c.t1_us > 0) || !(c.t2_us > 0)) throw FormatError(ctx + ": t1_us and t2_us must be positive");
    out[detail::qubit_key(k, what)] = c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counts: {role, shots, counts: {bitstring: n}, backend, calibration}
// ---------------------------------------------------------------------------

inline json counts_to_json(const CountData& d) {
  json counts = json::object();
  for (const auto& [k, n] : d.counts) counts[k] = n;
  return {{"role", std::string(to_string(d.role))},
          {"shots", d.shots},
          {"counts", counts},
          {"backend", d.backend},
          {"calibration", calibration_to_json(d.calibration)}};
}

inline CountData counts_from_json(const json& j, const std::string& what = "counts") {
  CountData d;
  const auto role = detail::field<std::string>(j, "role", what);
  const auto parsed = arm_role_from_string(role);
  if (!parsed) throw FormatError(what + ": unknown role '" + role + "'");
  d.role = *parsed;
  d.shots = detail::field<std::uint64_t>(j, "shots", what);
  const auto counts = detail::field<json>(j, "counts", what);
  if (!counts.is_object()) throw FormatError(what + ": 'counts' must be an object");
  for (const auto& [k, v] : counts.items()) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw FormatError(what + ": count for '" + k + "' must be a non-negative integer");
    d.counts[k] = v.get<std::uint64_t>();
  }
  if (j.contains("backend")) d.backend = detail::field<std::string>(j, "backend", what);
  if (j.contains("calibration") && !j.at("calibration").is_null())
    d.calibration = calibration_from_json(j.at("calibration"), what + ".calibration");
  const auto problems = d.violations();
  if (!problems.empty()) throw FormatError(what + ": " + problems.front());
  return d;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline CountData load_counts(const std::string& path) {
  return counts_from_json(parse_json(read_file(path), path), path);
}

inline std::map<std::size_t, Calibration> load_calibration(const std::string& path) {
  return calibration_from_json(parse_json(read_file(path), path), path);
}

// ---------------------------------------------------------------------------
// Circuit: {version, num_qubits, num_clbits, qubit_roles, instructions: [...]}
// ---------------------------------------------------------------------------

inline constexpr int kCircuitSchemaVersion = 1;

inline json circuit_to_json(const Circuit& c) {
  json roles = json::object();
  for (const auto& [q, r] : c.qubit_roles) roles[std::to_string(q)] = std::string(to_string(r));
  json insts = json::array();
  for (const auto& i : c.instructions) {
    json ji = {{"kind", std::string(to_string(i.kind))}, {"qubits", i.qubits}};
    ji["clbit"] = i.clbit ? json(*i.clbit) : json(nullptr);
    ji["condition"] = i.condition ? json{{"clbit", i.condition->clbit}, {"value", i.condition->value}} : json(nullptr);
    ji["theta"] = i.theta ? json(*i.theta) : json(nullptr);
    ji["duration"] = i.duration_us ? json(*i.duration_us) : json(nullptr);
    insts.push_back(std::move(ji));
  }
  return {{"version", kCircuitSchemaVersion},
          {"num_qubits", c.num_qubits},
          {"num_clbits", c.num_clbits},
          {"qubit_roles", roles},
          {"instructions", insts}};
}

inline Circuit circuit_from_json(const json& j, const std::string& what = "circuit") {
  const auto version = detail::field<int>(j, "version", what);
  if (version != kCircuitSchemaVersion) throw FormatError(what + ": unsupported version " + std::to_string(version));
  Circuit c;
  c.num_qubits = detail::field<std::size_t>(j, "num_qubits", what);
  c.num_clbits = detail::field<std::size_t>(j, "num_clbits", what);
  if (j.contains("qubit_roles")) {
    for (const auto& [k, v] : j.at("qubit_roles").items()) {
      const auto role = v.is_string() ? qubit_role_from_string(v.get<std::string>()) : std::nullopt;
      if (!role) throw FormatError(what + ": unknown role for qubit " + k);
      c.qubit_roles[detail::qubit_key(k, what)] = *role;
    }
  }
  const auto insts = detail::field<json>(j, "instructions", what);
  if (!insts.is_array()) throw FormatError(what + ": 'instructions' must be an array");
  for (std::size_t n = 0; n < insts.size(); ++n) {
    const auto& ji = insts[n];
    const auto ctx = what + ".instructions[" + std::to_string(n) + "]";
    Instruction inst;
    const auto kind = detail::field<std::string>(ji, "kind", ctx);
    const auto parsed = op_kind_from_string(kind);
    if (!parsed) throw FormatError(ctx + ": unknown kind '" + kind + "'");
    inst.kind = *parsed;
    inst.qubits = detail::field<std::vector<std::size_t>>(ji, "qubits", ctx);
    if (ji.contains("clbit") && !ji.at("clbit").is_null()) inst.clbit = detail::field<std::size_t>(ji, "clbit", ctx);
    if (ji.contains("condition") && !ji.at("condition").is_null()) {
      const auto& jc = ji.at("condition");
      inst.condition = Condition{detail::field<std::size_t>(jc, "clbit", ctx + ".condition"),
                                 detail::field<int>(jc, "value", ctx + ".condition")};
    }
    if (ji.contains("theta") && !ji.at("theta").is_null()) inst.theta = detail::field<double>(ji, "theta", ctx);
    if (ji.contains("duration") && !ji.at("duration").is_null())
      inst.duration_us = detail::field<double>(ji, "duration", ctx);
    c.instructions.push_back(std::move(inst));
  }
  return c;
}

}  // namespace orsim::io
