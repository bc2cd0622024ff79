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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "orsim/qmath.hpp"
#include "orsim/rng.hpp"

namespace orsim {

/// Objective-reduction parameters. `tau_us` may be +infinity (no collapse).
struct ORSettings {
  double tau_us = std::numeric_limits<double>::infinity();
  double gamma = 1.0;
  std::set<std::size_t> coupled_qubits;

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (!(tau_us > 0)) out.emplace_back("tau must be positive");
    if (!(gamma > 0)) out.emplace_back("gamma must be positive");
    return out;
  }
  void validate() const {
    const auto v = violations();
    if (!v.empty()) throw std::invalid_argument("ORSettings: " + v.front());
  }
};

/// Surviving superposition fraction e^{-t/tau}. This is the single seam for the collapse law.
inline double or_factor(double t, double tau) {
  if (!(t >= 0)) throw std::invalid_argument("or_factor: t must be non-negative");
  if (!(tau > 0)) throw std::invalid_argument("or_factor: tau must be positive");
  if (std::isinf(tau)) return 1.0;
  return std::exp(-t / tau);
}

namespace detail {

inline void apply_or(Eigen::MatrixXcd& m, std::size_t qubit, std::size_t num_qubits, double t, double tau) {
  scale_coherence(m, qubit, num_qubits, or_factor(t, tau));
}

}  // namespace detail

/// Suppresses the coherence of a single gravity-coupled qubit marginal; populations are untouched.
inline DensityMatrix apply_or(const DensityMatrix& rho, double t, const ORSettings& settings) {
  settings.validate();
  if (rho.num_qubits() != 1) throw std::invalid_argument("apply_or: expected a single-qubit marginal");
  Eigen::MatrixXcd m = rho.matrix().eigen();
  detail::apply_or(m, 0, 1, t, settings.tau_us);
  return DensityMatrix::unchecked(ComplexMatrix(std::move(m)));
}

/// Poisson collapse events at rate 1/tau on [0, t], in increasing order.
inline std::vector<double> sample_collapse_events(double t, double tau, std::uint64_t seed) {
  if (!(t >= 0)) throw std::invalid_argument("sample_collapse_events: t must be non-negative");
  if (!(tau > 0)) throw std::invalid_argument("sample_collapse_events: tau must be positive");
  std::vector<double> events;
  if (std::isinf(tau)) return events;
  Rng rng(seed);
  double clock = rng.exponential(tau);
  while (clock <= t) {
    events.push_back(clock);
    clock += rng.exponential(tau);
  }
  return events;
}

/// One stochastic realization of the OR channel on a single qubit.
struct ORTrajectory {
  bool collapsed = false;
  int outcome = -1;  // basis state the qubit was projected to, -1 if coherent
  double first_event_us = std::numeric_limits<double>::infinity();
};

/**
 * Trajectory unravelling of `apply_or`: a trajectory with at least one
 * collapse event projects the qubit onto |0> or |1> with Born weights at the
 * first event; otherwise the state is left alone. Trajectory i uses
 * derive_seed(seed, i), so batches can be split across workers.
 */
inline std::vector<ORTrajectory> sample_or_trajectories(const DensityMatrix& rho, double t, double tau,
                                                        std::size_t count, std::uint64_t seed) {
  if (rho.num_qubits() != 1) throw std::invalid_argument("sample_or_trajectories: expected a single-qubit state");
  const double p1 = std::clamp(rho(1, 1).real(), 0.0, 1.0);
  std::vector<ORTrajectory> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto stream = derive_seed(seed, i);
    const auto events = sample_collapse_events(t, tau, stream);
    if (events.empty()) continue;
    Rng pick(derive_seed(stream, 1));
    out[i].collapsed = true;
    out[i].outcome = pick.uniform() < p1 ? 1 : 0;
    out[i].first_event_us = events.front();
  }
  return out;
}

/// Post-OR state of one trajectory.
inline DensityMatrix trajectory_state(const DensityMatrix& rho, const ORTrajectory& traj) {
  if (!traj.collapsed) return rho;
  return DensityMatrix::basis(1, static_cast<std::size_t>(traj.outcome));
}

/// Ensemble mean of the trajectory states.
inline DensityMatrix trajectory_mean(const DensityMatrix& rho, const std::vector<ORTrajectory>& trajectories) {
  if (trajectories.empty()) throw std::invalid_argument("trajectory_mean: empty ensemble");
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
  for (const auto& t : trajectories) acc += trajectory_state(rho, t).matrix().eigen();
  acc /= static_cast<double>(trajectories.size());
  return DensityMatrix::unchecked(ComplexMatrix(std::move(acc)));
}

}  // namespace orsim
