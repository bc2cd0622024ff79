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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orsim/circuit.hpp"
#include "orsim/counts.hpp"
#include "orsim/or_model.hpp"
#include "orsim/qmath.hpp"
#include "orsim/rng.hpp"
#include "orsim/simulator.hpp"
#include "orsim/stats.hpp"

namespace orsim {

/// What c[2] records at the end of the protocol.
enum class FinalReadout { test_qubit, gravity_qubit };

struct ProtocolParams {
  double delay_us = 50.0;
  double cry_angle = std::numbers::pi / 4;
  NoiseParams noise{300.0, 150.0};
  /// Overrides keyed by circuit qubit index (e.g. from a calibration pull).
  std::map<std::size_t, NoiseParams> qubit_noise;
  ChannelMode channel_mode = ChannelMode::paper;
  /// Coherence magnitude left after the partial measurement, replacing the exact CRY value.
  std::optional<double> coherence_injection;
  /// OR channel; an empty coupled set means "the test qubit".
  std::optional<ORSettings> or_settings;
  bool swap_roles = false;
  FinalReadout c2_readout = FinalReadout::test_qubit;

  void validate() const {
    if (!(delay_us >= 0)) throw std::invalid_argument("ProtocolParams: delay must be non-negative");
    if (!std::isfinite(cry_angle)) throw std::invalid_argument("ProtocolParams: cry_angle must be finite");
    noise.validate();
    for (const auto& [q, p] : qubit_noise) p.validate();
    if (coherence_injection && !(*coherence_injection >= 0 && *coherence_injection <= 0.5))
      throw std::invalid_argument("ProtocolParams: coherence_injection must lie in [0, 0.5]");
    if (or_settings) or_settings->validate();
  }

  /**
   * CRY angle actually placed in the circuit. With an injection c the angle is
   * 2 acos(2c): starting from coherence 1/2, the exact ancilla channel leaves
   * (1/2) cos(theta/2), so this realizes the injected matrix as a real gate.
   */
  double effective_cry_angle() const {
    if (coherence_injection) return 2.0 * std::acos(2.0 * *coherence_injection);
    return cry_angle;
  }

  NoiseModel noise_model() const { return {noise, qubit_noise}; }

  NoiseParams noise_for(std::size_t q) const {
    const auto it = qubit_noise.find(q);
    return it == qubit_noise.end() ? noise : it->second;
  }
};

/// Physical qubit assignment. Gravity qubits are fixed; swap exchanges the primaries' roles.
struct ProtocolLayout {
  std::size_t test = 0;
  std::size_t control = 1;
  std::size_t ancilla_test = 2;
  std::size_t gravity1 = 3;
  std::size_t gravity2 = 4;
  std::size_t ancilla_control = 5;

  static ProtocolLayout for_swap(bool swap) {
    ProtocolLayout l;
    if (swap) {
      std::swap(l.test, l.control);
      std::swap(l.ancilla_test, l.ancilla_control);
    }
    return l;
  }
};

inline constexpr std::size_t kProtocolQubits = 6;
inline constexpr std::size_t kProtocolClbits = 3;
/// Partial-measurement record of the test arm; drives the gravity qubits.
inline constexpr std::size_t kRecordClbit = 0;
/// Control arm final readout (also holds the control ancilla's record until then).
inline constexpr std::size_t kControlClbit = 1;
/// Test arm final readout (or gravity qubit 1 under FinalReadout::gravity_qubit).
inline constexpr std::size_t kTestClbit = 2;

/**
 * The six-qubit protocol: X and H on both primaries, CRY from each primary
 * to its ancilla, ancilla readout, gravity-qubit flip conditioned on the test
 * record (c0 = 1 flips gravity1, c0 = 0 flips gravity2), a delay on every
 * unmeasured qubit, closing H and final readout.
 */
inline Circuit build_protocol(const ProtocolParams& params) {
  params.validate();
  const auto l = ProtocolLayout::for_swap(params.swap_roles);
  const double theta = params.effective_cry_angle();
  Circuit c;
  c.num_qubits = kProtocolQubits;
  c.num_clbits = kProtocolClbits;
  c.qubit_roles = {{l.test, QubitRole::test},         {l.control, QubitRole::control},
                   {l.ancilla_test, QubitRole::ancilla_test}, {l.ancilla_control, QubitRole::ancilla_control},
                   {l.gravity1, QubitRole::gravity1}, {l.gravity2, QubitRole::gravity2}};
  const std::size_t lo = std::min(l.test, l.control);
  const std::size_t hi = std::max(l.test, l.control);
  const auto ancilla_of = [&](std::size_t q) { return q == l.test ? l.ancilla_test : l.ancilla_control; };

  c.add(Instruction::x(lo)).add(Instruction::x(hi));
  c.add(Instruction::h(lo)).add(Instruction::h(hi));
  c.add(Instruction::cry(lo, ancilla_of(lo), theta)).add(Instruction::cry(hi, ancilla_of(hi), theta));
  c.add(Instruction::measure(l.ancilla_test, kRecordClbit));
  c.add(Instruction::measure(l.ancilla_control, kControlClbit));
  c.add(Instruction::conditional_x(l.gravity1, kRecordClbit, 1));
  c.add(Instruction::conditional_x(l.gravity2, kRecordClbit, 0));
  c.add(Instruction::delay({lo, hi, l.gravity1, l.gravity2}, params.delay_us));
  c.add(Instruction::h(lo)).add(Instruction::h(hi));
  c.add(Instruction::measure(l.control, kControlClbit));
  c.add(Instruction::measure(params.c2_readout == FinalReadout::test_qubit ? l.test : l.gravity1, kTestClbit));
  return c;
}

/// OR settings for a concrete layout; defaults the coupled set to the test qubit.
inline std::optional<ORSettings> resolve_or_settings(const ProtocolParams& params) {
  if (!params.or_settings) return std::nullopt;
  auto s = *params.or_settings;
  if (s.coupled_qubits.empty()) s.coupled_qubits = {ProtocolLayout::for_swap(params.swap_roles).test};
  return s;
}

// ---------------------------------------------------------------------------
// Staged single-qubit prediction
// ---------------------------------------------------------------------------

struct PredictionStage {
  std::string name;
  DensityMatrix rho;
};

struct StagedPrediction {
  std::vector<PredictionStage> stages;
  std::array<double, 2> probabilities{};

  const DensityMatrix& stage(const std::string& name) const {
    for (const auto& s : stages)
      if (s.name == name) return s.rho;
    throw std::out_of_range("no prediction stage named " + name);
  }
};

namespace detail {

/// Exact weak measurement: CRY onto a fresh ancilla, ancilla readout averaged, ancilla traced out.
inline DensityMatrix weak_measurement(const DensityMatrix& rho, double theta) {
  Eigen::MatrixXcd joint = tensor(rho, DensityMatrix::basis(1, 0)).matrix().eigen();
  const std::array<std::size_t, 2> targets{0, 1};
  conjugate(joint, gate_cry(theta).eigen(), targets, 2);
  scale_coherence(joint, 1, 2, 0.0);
  return DensityMatrix::unchecked(reduce_to_qubit(joint, 0, 2));
}

}  // namespace detail

/**
 * Test-arm state after each step: "superposition" (X, H), "partial_measurement",
 * "delay" (T1, T2 and OR when configured), "final_hadamard", plus the final
 * Z-basis probabilities.
 */
inline StagedPrediction predict(const ProtocolParams& params) {
  params.validate();
  const auto layout = ProtocolLayout::for_swap(params.swap_roles);
  const auto noise = params.noise_for(layout.test);
  const std::array<std::size_t, 1> q0{0};

  StagedPrediction out;
  auto rho = apply_gate(DensityMatrix::basis(1, 0), gate_x(), q0);
  rho = apply_gate(rho, gate_h(), q0);
  out.stages.push_back({"superposition", rho});

  if (params.coherence_injection) {
    ComplexMatrix m = rho.matrix();
    for (auto [r, c] : {std::pair{0, 1}, std::pair{1, 0}}) {
      const Complex v = m(r, c);
      const double mag = std::abs(v);
      m(r, c) = mag > 0 ? v / mag * *params.coherence_injection : Complex(-*params.coherence_injection);
    }
    rho = DensityMatrix::unchecked(std::move(m));
  } else {
    rho = detail::weak_measurement(rho, params.cry_angle);
  }
  out.stages.push_back({"partial_measurement", rho});

  rho = amplitude_damp(rho, params.delay_us, noise.t1, params.channel_mode);
  rho = phase_damp(rho, params.delay_us, noise.t2, params.channel_mode, noise.t1);
  if (params.or_settings) rho = apply_or(rho, params.delay_us, *params.or_settings);
  out.stages.push_back({"delay", rho});

  rho = apply_gate(rho, gate_h(), q0);
  out.stages.push_back({"final_hadamard", rho});
  const auto p = measure_probs(rho);
  out.probabilities = {p[0], p[1]};
  return out;
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct ArmSummary {
  ArmRole role = ArmRole::test;
  std::uint64_t shots = 0;
  std::uint64_t ones = 0;
  double p1 = 0;        // proportion of "1"
  double se = 0;        // binomial standard error of p1
  double distance = 0;  // |p1 - 1/2|
  bool operator==(const ArmSummary&) const = default;
};

/// Closed-form tau estimate from the ratio of distances from uniform.
struct TauFit {
  enum class Status { ok, no_signal, complete_collapse };
  Status status = Status::no_signal;
  double delay_us = 0;
  double ratio = 1;
  double ratio_err = 0;
  double tau_us = std::numeric_limits<double>::infinity();
  double tau_err_us = std::numeric_limits<double>::infinity();  // 1 sigma, delta method
  double ci_low_us = 0;                                         // 95% interval from the ratio interval
  double ci_high_us = std::numeric_limits<double>::infinity();
  bool operator==(const TauFit&) const = default;
};

inline std::string_view to_string(TauFit::Status s) {
  switch (s) {
    case TauFit::Status::ok: return "ok";
    case TauFit::Status::no_signal: return "no_signal";
    case TauFit::Status::complete_collapse: return "complete_collapse";
  }
  return "?";
}

struct AnalysisReport {
  ArmSummary test;
  ArmSummary control;
  double difference = 0;     // p1(test) - p1(control)
  double se_difference = 0;  // sqrt(se_t^2 + se_c^2)
  double z = 0;
  double p_value = 1;
  std::optional<TauFit> fit;
  bool operator==(const AnalysisReport&) const = default;
};

namespace detail {

inline ArmSummary summarize(const CountData& data, ArmRole role) {
  data.validate();
  for (const auto& [k, n] : data.counts)
    if (k.size() != 1) throw std::invalid_argument("analyze_counts: expected single-bit outcomes, got '" + k + "'");
  ArmSummary s;
  s.role = role;
  s.shots = data.shots;
  s.ones = data.count("1");
  s.p1 = static_cast<double>(s.ones) / static_cast<double>(s.shots);
  s.se = std::sqrt(s.p1 * (1 - s.p1) / static_cast<double>(s.shots));
  s.distance = std::abs(s.p1 - 0.5);
  return s;
}

}  // namespace detail

/// Two-proportion comparison of the arms' "1" frequencies.
inline AnalysisReport analyze_counts(const CountData& test, const CountData& control) {
  AnalysisReport r;
  r.test = detail::summarize(test, ArmRole::test);
  r.control = detail::summarize(control, ArmRole::control);
  r.difference = r.test.p1 - r.control.p1;
  r.se_difference = std::hypot(r.test.se, r.control.se);
  if (r.se_difference > 0) {
    r.z = r.difference / r.se_difference;
  } else {
    r.z = r.difference == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.difference);
  }
  r.p_value = stats::two_sided_p_value(r.z);
  return r;
}

/// Shot count implied by a binomial standard error: N = p(1-p)/se^2.
inline std::uint64_t infer_shots(double p_hat, double se) {
  if (!(p_hat > 0 && p_hat < 1)) throw std::invalid_argument("infer_shots: proportion must lie in (0, 1)");
  if (!(se > 0)) throw std::invalid_argument("infer_shots: standard error must be positive");
  return static_cast<std::uint64_t>(std::llround(p_hat * (1 - p_hat) / (se * se)));
}

/// z for a two-sided 95% interval.
inline constexpr double kZ95 = 1.959963984540054;

/**
 * Solves e^{-delay/tau} = (p0_test - 1/2) / (p0_control - 1/2), using the
 * control arm as the tau = infinity baseline. A ratio outside (0, 1) is
 * reported as `no_signal`; a test arm exactly at 1/2 as `complete_collapse`.
 */
inline TauFit fit_tau(const CountData& test, const CountData& control, double delay_us) {
  if (!(delay_us > 0)) throw std::invalid_argument("fit_tau: delay must be positive");
  const auto t = detail::summarize(test, ArmRole::test);
  const auto c = detail::summarize(control, ArmRole::control);
  // p0 - 1/2 = 1/2 - p1; the signed ratio is the same for either label.
  const double a = 0.5 - t.p1;
  const double b = 0.5 - c.p1;
  TauFit fit;
  fit.delay_us = delay_us;
  if (b == 0) return fit;
  fit.ratio = a / b;
  if (a == 0) {
    fit.status = TauFit::Status::complete_collapse;
    fit.tau_us = 0;
    fit.tau_err_us = 0;
    fit.ci_high_us = 0;
    fit.ratio_err = t.se / std::abs(b);
    return fit;
  }
  fit.ratio_err = std::abs(fit.ratio) * std::hypot(t.se / a, c.se / b);
  if (!(fit.ratio > 0 && fit.ratio < 1)) return fit;

  const double log_r = std::log(fit.ratio);
  fit.status = TauFit::Status::ok;
  fit.tau_us = -delay_us / log_r;
  fit.tau_err_us = delay_us * fit.ratio_err / (fit.ratio * log_r * log_r);
  const double r_lo = fit.ratio - kZ95 * fit.ratio_err;
  const double r_hi = fit.ratio + kZ95 * fit.ratio_err;
  fit.ci_low_us = r_lo <= 0 ? 0.0 : -delay_us / std::log(r_lo);
  fit.ci_high_us = r_hi >= 1 ? std::numeric_limits<double>::infinity() : -delay_us / std::log(r_hi);
  return fit;
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

/// Single-clbit marginal of joint counts.
inline CountData arm_counts(const CountData& joint, std::size_t clbit, ArmRole role) {
  joint.validate();
  CountData out;
  out.role = role;
  out.shots = joint.shots;
  out.backend = joint.backend;
  out.calibration = joint.calibration;
  for (const auto& [k, n] : joint.counts) {
    if (clbit >= k.size()) throw std::invalid_argument("arm_counts: clbit beyond record width");
    out.counts[std::string(1, k[k.size() - 1 - clbit])] += n;
  }
  return out;
}

/// Adds `more` into `pool` (same role).
inline void pool_counts(CountData& pool, const CountData& more) {
  for (const auto& [k, n] : more.counts) pool.counts[k] += n;
  pool.shots += more.shots;
  if (pool.backend.empty()) pool.backend = more.backend;
}

struct ExperimentResult {
  AnalysisReport report;
  CountData test;
  CountData control;
  std::vector<CountData> raw;  // joint counts per repetition
};

/**
 * Repeats the protocol, flipping `swap_roles` on every other repetition, and
 * pools counts by role. Repetition i samples with derive_seed(seed, i).
 * `n_shots` is per repetition.
 */
inline ExperimentResult run_experiment(const ProtocolParams& params, std::uint64_t n_shots, std::uint64_t seed,
                                       std::size_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("run_experiment: repetitions must be at least 1");
  ExperimentResult res;
  res.test.role = ArmRole::test;
  res.control.role = ArmRole::control;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    auto p = params;
    p.swap_roles = params.swap_roles != (rep % 2 == 1);
    const auto circuit = build_protocol(p);
    const auto joint = sample_shots(circuit, p.noise_model(), p.channel_mode, resolve_or_settings(p), n_shots,
                                    derive_seed(seed, rep));
    pool_counts(res.test, arm_counts(joint, kTestClbit, ArmRole::test));
    pool_counts(res.control, arm_counts(joint, kControlClbit, ArmRole::control));
    res.raw.push_back(joint);
  }
  res.report = analyze_counts(res.test, res.control);
  return res;
}

}  // namespace orsim
