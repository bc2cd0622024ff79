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
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orsim {

enum class OpKind { x, h, ry, cry, measure, conditional_x, delay };

inline std::string_view to_string(OpKind k) {
  switch (k) {
    case OpKind::x: return "x";
    case OpKind::h: return "h";
    case OpKind::ry: return "ry";
    case OpKind::cry: return "cry";
    case OpKind::measure: return "measure";
    case OpKind::conditional_x: return "conditional_x";
    case OpKind::delay: return "delay";
  }
  return "?";
}

inline std::optional<OpKind> op_kind_from_string(std::string_view s) {
  for (auto k : {OpKind::x, OpKind::h, OpKind::ry, OpKind::cry, OpKind::measure, OpKind::conditional_x, OpKind::delay})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

enum class QubitRole { control, test, ancilla_control, ancilla_test, gravity1, gravity2 };

inline std::string_view to_string(QubitRole r) {
  switch (r) {
    case QubitRole::control: return "control";
    case QubitRole::test: return "test";
    case QubitRole::ancilla_control: return "ancilla_control";
    case QubitRole::ancilla_test: return "ancilla_test";
    case QubitRole::gravity1: return "gravity1";
    case QubitRole::gravity2: return "gravity2";
  }
  return "?";
}

inline std::optional<QubitRole> qubit_role_from_string(std::string_view s) {
  for (auto r : {QubitRole::control, QubitRole::test, QubitRole::ancilla_control, QubitRole::ancilla_test,
                 QubitRole::gravity1, QubitRole::gravity2})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

/// Classical guard: the instruction runs only when clbit == value.
struct Condition {
  std::size_t clbit = 0;
  int value = 1;
  bool operator==(const Condition&) const = default;
};

/// One circuit step. Durations are microseconds, angles radians.
struct Instruction {
  OpKind kind = OpKind::x;
  std::vector<std::size_t> qubits;
  std::optional<std::size_t> clbit;
  std::optional<Condition> condition;
  std::optional<double> duration_us;
  std::optional<double> theta;

  static Instruction x(std::size_t q) { return {OpKind::x, {q}, {}, {}, {}, {}}; }
  static Instruction h(std::size_t q) { return {OpKind::h, {q}, {}, {}, {}, {}}; }
  static Instruction ry(std::size_t q, double theta) { return {OpKind::ry, {q}, {}, {}, {}, theta}; }
  static Instruction cry(std::size_t control, std::size_t target, double theta) {
    return {OpKind::cry, {control, target}, {}, {}, {}, theta};
  }
  static Instruction measure(std::size_t q, std::size_t clbit) { return {OpKind::measure, {q}, clbit, {}, {}, {}}; }
  static Instruction conditional_x(std::size_t q, std::size_t clbit, int value) {
    return {OpKind::conditional_x, {q}, {}, Condition{clbit, value}, {}, {}};
  }
  static Instruction delay(std::vector<std::size_t> qubits, double duration_us) {
    return {OpKind::delay, std::move(qubits), {}, {}, duration_us, {}};
  }

  bool operator==(const Instruction&) const = default;
};

struct Circuit {
  std::size_t num_qubits = 1;
  std::size_t num_clbits = 0;
  std::vector<Instruction> instructions;
  std::map<std::size_t, QubitRole> qubit_roles;

  Circuit& add(Instruction inst) {
    instructions.push_back(std::move(inst));
    return *this;
  }

  /// First qubit carrying `role`, if any.
  std::optional<std::size_t> qubit_with_role(QubitRole role) const {
    for (const auto& [q, r] : qubit_roles)
      if (r == role) return q;
    return std::nullopt;
  }

  bool operator==(const Circuit&) const = default;
};

/// Outcome of `validate`: empty `errors` means the circuit is well formed.
struct ValidationResult {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Collects every structural violation in the circuit.
inline ValidationResult validate(const Circuit& circuit) {
  ValidationResult res;
  auto err = [&](std::size_t i, const std::string& msg) {
    res.errors.push_back("instruction " + std::to_string(i) + ": " + msg);
  };
  if (circuit.num_qubits == 0) res.errors.emplace_back("circuit must have at least one qubit");
  for (const auto& [q, role] : circuit.qubit_roles)
    if (q >= circuit.num_qubits) res.errors.push_back("role " + std::string(to_string(role)) + " names qubit out of range");

  std::set<std::size_t> written;
  for (std::size_t i = 0; i < circuit.instructions.size(); ++i) {
    const auto& inst = circuit.instructions[i];
    const auto kind = to_string(inst.kind);
    for (auto q : inst.qubits)
      if (q >= circuit.num_qubits) err(i, "qubit index " + std::to_string(q) + " out of range");
    std::set<std::size_t> unique(inst.qubits.begin(), inst.qubits.end());
    if (unique.size() != inst.qubits.size()) err(i, "repeated qubit operand");

    std::size_t arity = 1;
    if (inst.kind == OpKind::cry) arity = 2;
    if (inst.kind == OpKind::delay) {
      if (inst.qubits.empty()) err(i, "delay names no qubits");
    } else if (inst.qubits.size() != arity) {
      err(i, std::string(kind) + " expects " + std::to_string(arity) + " qubit(s)");
    }

    const bool needs_theta = inst.kind == OpKind::ry || inst.kind == OpKind::cry;
    if (needs_theta && !inst.theta) err(i, std::string(kind) + " requires an angle");
    if (!needs_theta && inst.theta) err(i, std::string(kind) + " does not take an angle");

    if (inst.kind == OpKind::delay) {
      if (!inst.duration_us) err(i, "delay requires a duration");
      else if (!(*inst.duration_us >= 0)) err(i, "delay duration must be non-negative");
    } else if (inst.duration_us) {
      err(i, std::string(kind) + " does not take a duration");
    }

    if (inst.kind == OpKind::measure) {
      if (!inst.clbit) err(i, "measure requires a clbit");
      else if (*inst.clbit >= circuit.num_clbits) err(i, "clbit index " + std::to_string(*inst.clbit) + " out of range");
    } else if (inst.clbit) {
      err(i, std::string(kind) + " does not write a clbit");
    }

    if (inst.kind == OpKind::conditional_x) {
      if (!inst.condition) {
        err(i, "conditional_x requires a condition");
      } else {
        const auto& c = *inst.condition;
        if (c.clbit >= circuit.num_clbits) err(i, "condition clbit " + std::to_string(c.clbit) + " out of range");
        else if (!written.contains(c.clbit)) err(i, "condition precedes measurement of c[" + std::to_string(c.clbit) + "]");
        if (c.value != 0 && c.value != 1) err(i, "condition value must be 0 or 1");
      }
    } else if (inst.condition) {
      err(i, std::string(kind) + " cannot carry a condition");
    }

    if (inst.kind == OpKind::measure && inst.clbit) written.insert(*inst.clbit);
  }
  return res;
}

inline void require_valid(const Circuit& circuit) {
  const auto res = validate(circuit);
  if (!res.ok()) throw std::invalid_argument("invalid circuit: " + res.errors.front());
}

/// Shortest decimal text that round-trips the double.
inline std::string format_exact(double v) {
  char buf[48];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  const double a = std::abs(v);
  if (std::string_view(buf).find('e') == std::string_view::npos || a < 1e-4 || a >= 1e15) return buf;
  // %g chose an exponent; use the shortest fixed form instead.
  for (int decimals = 0; decimals <= 20; ++decimals) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/**
 * OpenQASM 3 rendering. Output depends only on the instruction list, so it is
 * byte-stable; numbers use the shortest round-tripping decimal form.
 */
inline std::string export_qasm3(const Circuit& circuit) {
  require_valid(circuit);
  auto q = [](std::size_t i) { return "q[" + std::to_string(i) + "]"; };
  std::string out;
  out += "OPENQASM 3.0;\n";
  out += "include \"stdgates.inc\";\n";
  out += "qubit[" + std::to_string(circuit.num_qubits) + "] q;\n";
  if (circuit.num_clbits > 0) out += "bit[" + std::to_string(circuit.num_clbits) + "] c;\n";
  for (const auto& inst : circuit.instructions) {
    switch (inst.kind) {
      case OpKind::x: out += "x " + q(inst.qubits[0]) + ";\n"; break;
      case OpKind::h: out += "h " + q(inst.qubits[0]) + ";\n"; break;
      case OpKind::ry: out += "ry(" + format_exact(*inst.theta) + ") " + q(inst.qubits[0]) + ";\n"; break;
      case OpKind::cry:
        out += "cry(" + format_exact(*inst.theta) + ") " + q(inst.qubits[0]) + ", " + q(inst.qubits[1]) + ";\n";
        break;
      case OpKind::measure:
        out += "c[" + std::to_string(*inst.clbit) + "] = measure " + q(inst.qubits[0]) + ";\n";
        break;
      case OpKind::conditional_x:
        out += "if (c[" + std::to_string(inst.condition->clbit) + "] == " + std::to_string(inst.condition->value) +
               ") {\n  x " + q(inst.qubits[0]) + ";\n}\n";
        break;
      case OpKind::delay: {
        out += "delay[" + format_exact(*inst.duration_us) + "us]";
        for (std::size_t i = 0; i < inst.qubits.size(); ++i) out += (i ? ", " : " ") + q(inst.qubits[i]);
        out += ";\n";
        break;
      }
    }
  }
  return out;
}

}  // namespace orsim
