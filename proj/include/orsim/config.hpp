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

// Replication config loader (requires yaml-cpp).
//
// Schema (only `noise.t1_us` and `noise.t2_us` are required):
//
//   protocol:
//     delay_us: 50              # >= 0
//     cry_angle: 0.785398       # radians, default pi/4
//     channel_mode: paper       # paper | kraus
//     coherence_injection: 0.25 # optional, in [0, 0.5]
//     swap_roles: false
//     c2_readout: test          # test | gravity
//   noise:
//     t1_us: 300
//     t2_us: 150
//     qubits:                   # optional per-qubit overrides
//       0: {t1_us: 280, t2_us: 140}
//   or:                         # optional; either tau_us or a point-mass geometry
//     tau_us: 65.5
//     bits: 2                   # with mass_per_bit_kg and separation_m instead of tau_us
//     mass_per_bit_kg: 1.0e-12
//     separation_m: 1.0e-4
//     gamma: 1
//     coupled_qubits: [0]       # default: the test qubit
//   run:
//     shots: 2590
//     seed: 0
//     repetitions: 1

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <yaml-cpp/yaml.h>

#include "orsim/counts.hpp"
#include "orsim/dp_gravity.hpp"
#include "orsim/experiment.hpp"

namespace orsim::config {

/// Invalid config; `line` is 1-based, 0 when unknown.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& source, int line, const std::string& message)
      : std::invalid_argument(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RunSettings {
  std::uint64_t shots = 2590;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;
};

struct ReplicationConfig {
  ProtocolParams protocol;
  RunSettings run;
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigError(source_, at.Mark().is_null() ? 0 : at.Mark().line + 1, msg);
  }

  void expect_map(const YAML::Node& n, const std::string& path) const {
    if (!n.IsMap()) fail(n, "'" + path + "' must be a mapping");
  }

  void only_keys(const YAML::Node& n, const std::string& path, const std::set<std::string>& allowed) const {
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) fail(kv.first, "unknown field '" + path + "." + key + "'");
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& path, const char* expected) const {
    if (!n.IsScalar()) fail(n, "'" + path + "' must be " + expected);
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "'" + path + "' must be " + expected);
    }
  }

  double number(const YAML::Node& parent, const char* key, const std::string& path) const {
    return scalar<double>(parent[key], path + "." + key, "a number");
  }

  double required_number(const YAML::Node& parent, const char* key, const std::string& path) const {
    if (!parent[key]) fail(parent, "missing required field '" + path + "." + key + "'");
    return number(parent, key, path);
  }

  NoiseParams noise(const YAML::Node& n, const std::string& path) const {
    expect_map(n, path);
    NoiseParams p{required_number(n, "t1_us", path), required_number(n, "t2_us", path)};
    const auto problems = p.violations();
    if (!problems.empty()) fail(n, "'" + path + "': " + problems.front());
    return p;
  }

 private:
  std::string source_;
};

}  // namespace detail

inline ReplicationConfig parse_config(const std::string& text, const std::string& source = "config") {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.is_null() ? 0 : e.mark.line + 1, e.msg);
  }
  const detail::Reader rd(source);
  if (!root.IsMap()) throw ConfigError(source, 0, "top level must be a mapping");
  rd.only_keys(root, "config", {"protocol", "noise", "or", "run"});

  ReplicationConfig cfg;
  auto& p = cfg.protocol;

  if (const auto n = root["protocol"]) {
    rd.expect_map(n, "protocol");
    rd.only_keys(n, "protocol", {"delay_us", "cry_angle", "channel_mode", "coherence_injection", "swap_roles", "c2_readout"});
    if (n["delay_us"]) {
      p.delay_us = rd.number(n, "delay_us", "protocol");
      if (!(p.delay_us >= 0)) rd.fail(n["delay_us"], "'protocol.delay_us' must be non-negative");
    }
    if (n["cry_angle"]) p.cry_angle = rd.number(n, "cry_angle", "protocol");
    if (n["channel_mode"]) {
      const auto mode = rd.scalar<std::string>(n["channel_mode"], "protocol.channel_mode", "paper or kraus");
      if (mode == "paper") p.channel_mode = ChannelMode::paper;
      else if (mode == "kraus") p.channel_mode = ChannelMode::kraus;
      else rd.fail(n["channel_mode"], "'protocol.channel_mode' must be paper or kraus");
    }
    if (n["coherence_injection"] && !n["coherence_injection"].IsNull()) {
      const double c = rd.number(n, "coherence_injection", "protocol");
      if (!(c >= 0 && c <= 0.5)) rd.fail(n["coherence_injection"], "'protocol.coherence_injection' must lie in [0, 0.5]");
      p.coherence_injection = c;
    }
    if (n["swap_roles"]) p.swap_roles = rd.scalar<bool>(n["swap_roles"], "protocol.swap_roles", "true or false");
    if (n["c2_readout"]) {
      const auto r = rd.scalar<std::string>(n["c2_readout"], "protocol.c2_readout", "test or gravity");
      if (r == "test") p.c2_readout = FinalReadout::test_qubit;
      else if (r == "gravity") p.c2_readout = FinalReadout::gravity_qubit;
      else rd.fail(n["c2_readout"], "'protocol.c2_readout' must be test or gravity");
    }
  }

  const auto noise = root["noise"];
  if (!noise) throw ConfigError(source, 0, "missing required section 'noise' (fields noise.t1_us, noise.t2_us)");
  rd.expect_map(noise, "noise");
  rd.only_keys(noise, "noise", {"t1_us", "t2_us", "qubits"});
  p.noise = rd.noise(noise, "noise");
  if (const auto qs = noise["qubits"]) {
    rd.expect_map(qs, "noise.qubits");
    for (const auto& kv : qs) {
      const auto q = rd.scalar<std::size_t>(kv.first, "noise.qubits key", "a qubit index");
      const auto path = "noise.qubits." + std::to_string(q);
      rd.only_keys(kv.second, path, {"t1_us", "t2_us"});
      p.qubit_noise[q] = rd.noise(kv.second, path);
    }
  }

  if (const auto n = root["or"]) {
    rd.expect_map(n, "or");
    rd.only_keys(n, "or", {"tau_us", "bits", "mass_per_bit_kg", "separation_m", "gamma", "coupled_qubits"});
    ORSettings s;
    if (n["gamma"]) {
      s.gamma = rd.number(n, "gamma", "or");
      if (!(s.gamma > 0)) rd.fail(n["gamma"], "'or.gamma' must be positive");
    }
    const bool geometry = n["bits"] || n["mass_per_bit_kg"] || n["separation_m"];
    if (n["tau_us"] && geometry) rd.fail(n, "'or' takes either tau_us or bits/mass_per_bit_kg/separation_m, not both");
    if (n["tau_us"]) {
      s.tau_us = rd.number(n, "tau_us", "or");
      if (!(s.tau_us > 0)) rd.fail(n["tau_us"], "'or.tau_us' must be positive");
    } else if (geometry) {
      if (!n["bits"]) rd.fail(n, "missing required field 'or.bits'");
      gravity::MassConfig m;
      m.n_bits = rd.scalar<std::size_t>(n["bits"], "or.bits", "a positive integer");
      m.mass_per_bit = rd.required_number(n, "mass_per_bit_kg", "or");
      m.separation = rd.required_number(n, "separation_m", "or");
      try {
        s.tau_us = gravity::collapse_time(gravity::self_energy_point(m), s.gamma) * 1e6;
      } catch (const std::invalid_argument& e) {
        rd.fail(n, std::string("'or': ") + e.what());
      }
    } else {
      rd.fail(n, "missing required field 'or.tau_us'");
    }
    if (const auto cq = n["coupled_qubits"]) {
      if (!cq.IsSequence()) rd.fail(cq, "'or.coupled_qubits' must be a list");
      for (const auto& q : cq) s.coupled_qubits.insert(rd.scalar<std::size_t>(q, "or.coupled_qubits", "a qubit index"));
    }
    p.or_settings = s;
  }

  if (const auto n = root["run"]) {
    rd.expect_map(n, "run");
    rd.only_keys(n, "run", {"shots", "seed", "repetitions"});
    if (n["shots"]) cfg.run.shots = rd.scalar<std::uint64_t>(n["shots"], "run.shots", "a positive integer");
    if (n["seed"]) cfg.run.seed = rd.scalar<std::uint64_t>(n["seed"], "run.seed", "a non-negative integer");
    if (n["repetitions"])
      cfg.run.repetitions = rd.scalar<std::size_t>(n["repetitions"], "run.repetitions", "a positive integer");
    if (cfg.run.shots == 0) rd.fail(n["shots"], "'run.shots' must be positive");
    if (cfg.run.repetitions == 0) rd.fail(n["repetitions"], "'run.repetitions' must be positive");
  }
  return cfg;
}

inline ReplicationConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path, 0, "cannot open config");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

/// Per-qubit T1/T2 overrides from a calibration snapshot.
inline void apply_calibration(ProtocolParams& params, const std::map<std::size_t, Calibration>& cal) {
  for (const auto& [q, c] : cal) {
    NoiseParams p{c.t1_us, c.t2_us};
    const auto problems = p.violations();
    if (!problems.empty()) throw std::invalid_argument("calibration for qubit " + std::to_string(q) + ": " + problems.front());
    params.qubit_noise[q] = p;
  }
}

}  // namespace orsim::config
