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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orsim {

/// Which arm a set of counts belongs to; `joint` marks full classical records.
enum class ArmRole { test, control, joint };

inline std::string_view to_string(ArmRole r) {
  switch (r) {
    case ArmRole::test: return "test";
    case ArmRole::control: return "control";
    case ArmRole::joint: return "joint";
  }
  return "?";
}

inline std::optional<ArmRole> arm_role_from_string(std::string_view s) {
  for (auto r : {ArmRole::test, ArmRole::control, ArmRole::joint})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

/// Per-qubit calibration snapshot (microseconds).
struct Calibration {
  double t1_us = 0;
  double t2_us = 0;
  std::string timestamp;
  bool operator==(const Calibration&) const = default;
};

/**
 * Shot counts for one experimental arm. Keys are bitstrings written
 * c[n-1]...c[0] (highest clbit first); per-arm data uses single-bit keys.
 */
struct CountData {
  std::map<std::string, std::uint64_t> counts;
  ArmRole role = ArmRole::joint;
  std::uint64_t shots = 0;
  std::string backend;
  std::map<std::size_t, Calibration> calibration;

  std::uint64_t count(const std::string& key) const {
    const auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (shots == 0) out.emplace_back("shots must be positive");
    std::uint64_t total = 0;
    for (const auto& [k, n] : counts) {
      total += n;
      if (k.empty() || k.find_first_not_of("01") != std::string::npos)
        out.push_back("outcome key '" + k + "' is not a bitstring");
    }
    if (total != shots)
      out.push_back("counts sum to " + std::to_string(total) + " but shots is " + std::to_string(shots));
    return out;
  }

  void validate() const {
    const auto v = violations();
    if (!v.empty()) throw std::invalid_argument("CountData: " + v.front());
  }

  bool operator==(const CountData&) const = default;
};

}  // namespace orsim
