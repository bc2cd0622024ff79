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

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orsim/circuit.hpp"
#include "orsim/counts.hpp"
#include "orsim/or_model.hpp"
#include "orsim/qmath.hpp"
#include "orsim/rng.hpp"

namespace orsim {

/// Per-qubit T1/T2. Qubits with no entry (and no uniform default) are noiseless.
struct NoiseModel {
  std::optional<NoiseParams> uniform;
  std::map<std::size_t, NoiseParams> per_qubit;

  static NoiseModel none() { return {}; }
  static NoiseModel all(NoiseParams p) { return {p, {}}; }

  std::optional<NoiseParams> for_qubit(std::size_t q) const {
    if (const auto it = per_qubit.find(q); it != per_qubit.end()) return it->second;
    return uniform;
  }

  void validate() const {
    if (uniform) uniform->validate();
    for (const auto& [q, p] : per_qubit) p.validate();
  }
};

/// One classical branch of a circuit evaluation.
struct BranchState {
  std::vector<std::uint8_t> record;  // value of c[i] at index i
  double probability = 0;
  /// Whole register, conditioned on `record`. Measured qubits stay in their projected basis state.
  DensityMatrix rho = DensityMatrix::basis(1, 0);
  /// Set once a conditional flip has fired on a gravity-role qubit in this branch.
  bool gravity_armed = false;

  /// Record as c[n-1]...c[0].
  std::string bitstring() const {
    std::string s;
    for (auto it = record.rbegin(); it != record.rend(); ++it) s += *it ? '1' : '0';
    return s;
  }
};

namespace detail {

/// Branches lighter than this are dropped at measurement.
inline constexpr double kBranchPruneThreshold = 1e-15;

struct WorkingBranch {
  std::vector<std::uint8_t> record;
  double probability;
  Eigen::MatrixXcd rho;
  bool armed;
};

inline bool is_gravity_qubit(const Circuit& c, std::size_t q) {
  const auto it = c.qubit_roles.find(q);
  return it != c.qubit_roles.end() && (it->second == QubitRole::gravity1 || it->second == QubitRole::gravity2);
}

inline void apply_delay(WorkingBranch& b, const Instruction& inst, std::size_t n, const NoiseModel& noise,
                        ChannelMode mode, const std::optional<ORSettings>& orset) {
  const double t = *inst.duration_us;
  for (auto q : inst.qubits) {
    if (const auto p = noise.for_qubit(q)) {
      amplitude_damp(b.rho, q, n, t, p->t1, mode);
      phase_damp(b.rho, q, n, t, p->t2, mode, p->t1);
    }
    if (orset && b.armed && orset->coupled_qubits.contains(q)) apply_or(b.rho, q, n, t, orset->tau_us);
  }
}

/// Splits `b` on the Z outcome of qubit q, recording into clbit.
inline void measure(std::vector<WorkingBranch>& out, WorkingBranch b, std::size_t q, std::size_t clbit,
                    std::size_t n) {
  const auto bit = std::size_t{1} << bit_of(q, n);
  double p1 = 0;
  for (Eigen::Index i = 0; i < b.rho.rows(); ++i)
    if (static_cast<std::size_t>(i) & bit) p1 += b.rho(i, i).real();
  p1 = std::clamp(p1, 0.0, 1.0);
  const std::array<double, 2> probs{1.0 - p1, p1};
  for (int outcome = 0; outcome < 2; ++outcome) {
    const double p = probs[static_cast<std::size_t>(outcome)];
    if (b.probability * p < kBranchPruneThreshold) continue;
    WorkingBranch nb{b.record, b.probability * p, b.rho, b.armed};
    for (Eigen::Index r = 0; r < nb.rho.rows(); ++r)
      for (Eigen::Index c = 0; c < nb.rho.cols(); ++c) {
        const bool rk = (static_cast<std::size_t>(r) & bit) != 0;
        const bool ck = (static_cast<std::size_t>(c) & bit) != 0;
        if (rk != static_cast<bool>(outcome) || ck != static_cast<bool>(outcome)) nb.rho(r, c) = 0;
      }
    nb.rho /= p;
    nb.record[clbit] = static_cast<std::uint8_t>(outcome);
    out.push_back(std::move(nb));
  }
}

}  // namespace detail

/**
 * Exact density-matrix evaluation with classical branching.
 *
 * Each Measure splits every live branch by Born weight; ConditionalX fires
 * only in branches whose record matches; Delay applies T1 then T2 to each
 * named qubit that has noise parameters, then the OR channel to named qubits
 * in `orset->coupled_qubits` for branches whose gravity coupling is armed.
 * Returns the terminal branches in a deterministic order.
 */
inline std::vector<BranchState> evolve_exact(const Circuit& circuit, const NoiseModel& noise, ChannelMode mode,
                                             const std::optional<ORSettings>& orset = std::nullopt) {
  require_valid(circuit);
  noise.validate();
  if (orset) orset->validate();

  const std::size_t n = circuit.num_qubits;
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  std::vector<detail::WorkingBranch> branches;
  {
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dim, dim);
    rho0(0, 0) = 1.0;
    branches.push_back({std::vector<std::uint8_t>(circuit.num_clbits, 0), 1.0, std::move(rho0), false});
  }

  const auto x = gate_x().eigen();
  const auto h = gate_h().eigen();
  for (const auto& inst : circuit.instructions) {
    if (inst.kind == OpKind::measure) {
      std::vector<detail::WorkingBranch> next;
      next.reserve(branches.size() * 2);
      for (auto& b : branches) detail::measure(next, std::move(b), inst.qubits[0], *inst.clbit, n);
      branches = std::move(next);
      continue;
    }
    for (auto& b : branches) {
      switch (inst.kind) {
        case OpKind::x: detail::conjugate(b.rho, x, inst.qubits, n); break;
        case OpKind::h: detail::conjugate(b.rho, h, inst.qubits, n); break;
        case OpKind::ry: detail::conjugate(b.rho, gate_ry(*inst.theta).eigen(), inst.qubits, n); break;
        case OpKind::cry: detail::conjugate(b.rho, gate_cry(*inst.theta).eigen(), inst.qubits, n); break;
        case OpKind::conditional_x:
          if (b.record[inst.condition->clbit] == inst.condition->value) {
            detail::conjugate(b.rho, x, inst.qubits, n);
            if (detail::is_gravity_qubit(circuit, inst.qubits[0])) b.armed = true;
          }
          break;
        case OpKind::delay: detail::apply_delay(b, inst, n, noise, mode, orset); break;
        case OpKind::measure: break;
      }
    }
  }

  std::vector<BranchState> out;
  out.reserve(branches.size());
  for (auto& b : branches)
    out.push_back({std::move(b.record), b.probability, DensityMatrix::unchecked(ComplexMatrix(std::move(b.rho))), b.armed});
  return out;
}

/// Probability of each full classical record, keyed c[n-1]...c[0].
inline std::map<std::string, double> outcome_distribution(const std::vector<BranchState>& branches) {
  std::map<std::string, double> dist;
  for (const auto& b : branches) dist[b.bitstring()] += b.probability;
  return dist;
}

/// Probability that clbit reads 1 across the branch set.
inline double clbit_marginal(const std::vector<BranchState>& branches, std::size_t clbit) {
  double p = 0;
  for (const auto& b : branches)
    if (b.record.at(clbit)) p += b.probability;
  return p;
}

/// Branch-averaged reduced state of one qubit.
inline DensityMatrix qubit_marginal(const std::vector<BranchState>& branches, std::size_t qubit) {
  ComplexMatrix acc(2);
  for (const auto& b : branches) acc = acc + Complex(b.probability) * reduce_to_qubit(b.rho, qubit).matrix();
  return DensityMatrix::unchecked(std::move(acc));
}

/// Draws `n_shots` records from a categorical distribution (keys visited in sorted order).
inline std::map<std::string, std::uint64_t> sample_distribution(const std::map<std::string, double>& dist,
                                                                std::uint64_t n_shots, std::uint64_t seed) {
  std::vector<std::string> keys;
  std::vector<double> cumulative;
  double total = 0;
  for (const auto& [k, p] : dist) {
    if (p <= 0) continue;
    total += p;
    keys.push_back(k);
    cumulative.push_back(total);
  }
  if (keys.empty()) throw std::invalid_argument("sample_distribution: no outcome has positive probability");
  std::map<std::string, std::uint64_t> counts;
  Rng rng(seed);
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++counts[keys[static_cast<std::size_t>(it - cumulative.begin())]];
  }
  return counts;
}

/// Seeded shot sampler over full classical records; frequencies converge to `evolve_exact`.
inline CountData sample_shots(const Circuit& circuit, const NoiseModel& noise, ChannelMode mode,
                              const std::optional<ORSettings>& orset, std::uint64_t n_shots, std::uint64_t seed) {
  if (n_shots == 0) throw std::invalid_argument("sample_shots: n_shots must be positive");
  const auto branches = evolve_exact(circuit, noise, mode, orset);
  CountData data;
  data.counts = sample_distribution(outcome_distribution(branches), n_shots, seed);
  data.role = ArmRole::joint;
  data.shots = n_shots;
  data.backend = "orsim-exact";
  return data;
}

}  // namespace orsim
