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

#include "orsim/experiment.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace orsim {
namespace {

using std::numbers::pi;

ProtocolParams replication_params() {
  ProtocolParams p;
  p.coherence_injection = 0.25;
  return p;
}

CountData arm(std::uint64_t ones, std::uint64_t shots, ArmRole role) {
  CountData d;
  d.role = role;
  d.shots = shots;
  d.counts = {{"0", shots - ones}, {"1", ones}};
  return d;
}

void expect_matrix(const DensityMatrix& rho, std::array<double, 4> want, double tol) {
  EXPECT_NEAR(rho(0, 0).real(), want[0], tol);
  EXPECT_NEAR(rho(0, 1).real(), want[1], tol);
  EXPECT_NEAR(rho(1, 0).real(), want[2], tol);
  EXPECT_NEAR(rho(1, 1).real(), want[3], tol);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(rho(r, c).imag(), 0.0, 1e-15);
}

TEST(Predict, ReplicationStages) {
  const auto pred = predict(replication_params());
  ASSERT_EQ(pred.stages.size(), 4u);
  expect_matrix(pred.stage("superposition"), {0.5, -0.5, -0.5, 0.5}, 1e-15);
  expect_matrix(pred.stage("partial_measurement"), {0.5, -0.25, -0.25, 0.5}, 5e-4);
  expect_matrix(pred.stage("delay"), {0.577, -0.179, -0.179, 0.423}, 5e-4);
  expect_matrix(pred.stage("final_hadamard"), {0.321, 0.077, 0.077, 0.679}, 5e-4);
  EXPECT_NEAR(pred.probabilities[0], 0.321, 5e-4);
  EXPECT_NEAR(pred.probabilities[1], 0.679, 5e-4);
  EXPECT_THROW(pred.stage("nope"), std::out_of_range);
}

TEST(Predict, CollapseLimit) {
  auto p = replication_params();
  ORSettings s;
  s.tau_us = 1e-9;
  p.or_settings = s;
  const auto pred = predict(p);
  EXPECT_NEAR(pred.probabilities[0], 0.5, 1e-12);
  EXPECT_NEAR(pred.probabilities[1], 0.5, 1e-12);
}

TEST(Predict, ZeroDelay) {
  auto p = replication_params();
  p.delay_us = 0;
  EXPECT_NEAR(predict(p).probabilities[0], 0.5 * (1 - 2 * 0.25), 1e-12);
}

TEST(Predict, ExactWeakMeasurement) {
  ProtocolParams p;
  const auto pred = predict(p);
  EXPECT_NEAR(pred.stage("partial_measurement")(0, 1).real(), -std::cos(pi / 8) / 2, 1e-12);
  // Same state from the independent enumerator: X, H, CRY, measure ancilla.
  Circuit c;
  c.num_qubits = 2;
  c.num_clbits = 1;
  c.add(Instruction::x(0)).add(Instruction::h(0)).add(Instruction::cry(0, 1, pi / 4)).add(Instruction::measure(1, 0));
  const auto ref = oracle::reduced(oracle::enumerate(c), 0, 2);
  EXPECT_LE((pred.stage("partial_measurement").matrix().eigen() - Eigen::MatrixXcd(ref)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Predict, HadamardIdentityWithOr) {
  for (auto mode : {ChannelMode::paper, ChannelMode::kraus})
    for (double tau : {10.0, 65.5, 300.0}) {
      auto p = replication_params();
      p.channel_mode = mode;
      ORSettings s;
      s.tau_us = tau;
      p.or_settings = s;
      const double c = -0.25;
      const double want = 0.5 * (1 + 2 * c * std::exp(-50.0 / 150) * std::exp(-50.0 / tau));
      EXPECT_NEAR(predict(p).probabilities[0], want, 1e-12);
    }
}

TEST(Predict, AgreesWithCircuitSimulation) {
  // The circuit realizes the injection as a CRY angle; predict injects the matrix directly.
  for (auto mode : {ChannelMode::paper, ChannelMode::kraus})
    for (std::optional<double> inj : {std::optional<double>(), std::optional<double>(0.25), std::optional<double>(0.1)})
      for (double tau : {std::numeric_limits<double>::infinity(), 40.0}) {
        auto p = replication_params();
        p.channel_mode = mode;
        p.coherence_injection = inj;
        if (std::isfinite(tau)) {
          ORSettings s;
          s.tau_us = tau;
          p.or_settings = s;
        }
        const auto bs = evolve_exact(build_protocol(p), p.noise_model(), p.channel_mode, resolve_or_settings(p));
        EXPECT_NEAR(1 - clbit_marginal(bs, kTestClbit), predict(p).probabilities[0], 1e-12);
      }
}

TEST(Predict, UsesPerQubitNoiseForTestQubit) {
  auto p = replication_params();
  p.qubit_noise[0] = {200, 100};
  const double want = 0.5 * (1 - 0.5 * std::exp(-50.0 / 100));
  EXPECT_NEAR(predict(p).probabilities[0], want, 1e-12);
  p.swap_roles = true;  // test qubit moves to q1, which keeps the defaults
  EXPECT_NEAR(predict(p).probabilities[0], 0.5 * (1 - 0.5 * std::exp(-50.0 / 150)), 1e-12);
}

TEST(Predict, FastEnough) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 100; ++i) predict(replication_params());
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
}

TEST(Predict, InvalidParams) {
  auto p = replication_params();
  p.coherence_injection = -0.1;
  EXPECT_THROW(predict(p), std::invalid_argument);
  p = replication_params();
  ORSettings s;
  s.tau_us = 0;
  p.or_settings = s;
  EXPECT_THROW(predict(p), std::invalid_argument);
}

TEST(NullInvariance, ExactArmsIdentical) {
  for (auto mode : {ChannelMode::paper, ChannelMode::kraus})
    for (bool swap : {false, true})
      for (std::optional<double> inj : {std::optional<double>(), std::optional<double>(0.25)}) {
        ProtocolParams p;
        p.channel_mode = mode;
        p.swap_roles = swap;
        p.coherence_injection = inj;
        const auto bs = evolve_exact(build_protocol(p), p.noise_model(), p.channel_mode);
        EXPECT_NEAR(clbit_marginal(bs, kTestClbit), clbit_marginal(bs, kControlClbit), 1e-12);
      }
}

TEST(RoleSwap, ExactMarginalsUnchanged) {
  auto p = replication_params();
  ORSettings s;
  s.tau_us = 65.5;
  p.or_settings = s;
  const auto a = evolve_exact(build_protocol(p), p.noise_model(), p.channel_mode, resolve_or_settings(p));
  p.swap_roles = true;
  const auto b = evolve_exact(build_protocol(p), p.noise_model(), p.channel_mode, resolve_or_settings(p));
  EXPECT_NEAR(clbit_marginal(a, kTestClbit), clbit_marginal(b, kTestClbit), 1e-12);
  EXPECT_NEAR(clbit_marginal(a, kControlClbit), clbit_marginal(b, kControlClbit), 1e-12);
}

TEST(GravityReadout, ClbitTwoTracksRecord) {
  auto p = replication_params();
  p.c2_readout = FinalReadout::gravity_qubit;
  const auto bs = evolve_exact(build_protocol(p), p.noise_model(), p.channel_mode);
  // Gravity qubit 1 is flipped exactly when c0 = 1, and the delay's T1 relaxes it.
  const double p_record = clbit_marginal(bs, kRecordClbit);
  EXPECT_NEAR(clbit_marginal(bs, kTestClbit), p_record * std::exp(-50.0 / 300), 1e-12);
}

TEST(AnalyzeCounts, ReferenceCounts) {
  const auto r = analyze_counts(arm(1088, 2590, ArmRole::test), arm(858, 2610, ArmRole::control));
  EXPECT_NEAR(r.test.p1, 0.4201, 1e-4);
  EXPECT_NEAR(r.control.p1, 0.3287, 1e-4);
  EXPECT_NEAR(r.test.se, 0.0097, 5e-5);
  EXPECT_NEAR(r.control.se, 0.0092, 5e-5);
  EXPECT_NEAR(r.difference * 100, 9.14, 0.05);
  EXPECT_NEAR(r.se_difference * 100, 1.34, 0.05);
  EXPECT_NEAR(r.z, 6.8, 0.2);
  EXPECT_LT(r.p_value, 1e-5);
  EXPECT_NEAR(r.test.distance * 100, 7.99, 0.05);
  EXPECT_NEAR(r.control.distance * 100, 17.13, 0.05);
  EXPECT_FALSE(r.fit.has_value());
}

TEST(AnalyzeCounts, IdenticalArms) {
  const auto r = analyze_counts(arm(400, 1000, ArmRole::test), arm(400, 1000, ArmRole::control));
  EXPECT_EQ(r.difference, 0.0);
  EXPECT_EQ(r.z, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(AnalyzeCounts, HandArithmetic) {
  const auto r = analyze_counts(arm(50, 100, ArmRole::test), arm(60, 100, ArmRole::control));
  EXPECT_NEAR(r.difference, -0.10, 1e-15);
  EXPECT_NEAR(r.se_difference, std::sqrt(0.0025 + 0.0024), 1e-15);
  EXPECT_NEAR(r.se_difference, 0.0700, 5e-5);
  EXPECT_NEAR(r.z, -1.43, 5e-3);
}

TEST(AnalyzeCounts, SymmetricUnderArmExchange) {
  const auto a = analyze_counts(arm(1088, 2590, ArmRole::test), arm(858, 2610, ArmRole::control));
  const auto b = analyze_counts(arm(858, 2610, ArmRole::test), arm(1088, 2590, ArmRole::control));
  EXPECT_DOUBLE_EQ(a.difference, -b.difference);
  EXPECT_DOUBLE_EQ(a.z, -b.z);
  EXPECT_DOUBLE_EQ(a.p_value, b.p_value);
  EXPECT_DOUBLE_EQ(a.se_difference, b.se_difference);
}

TEST(AnalyzeCounts, Errors) {
  CountData empty;
  empty.shots = 0;
  EXPECT_THROW(analyze_counts(empty, arm(1, 2, ArmRole::control)), std::invalid_argument);
  CountData wide;
  wide.shots = 2;
  wide.counts = {{"01", 2}};
  EXPECT_THROW(analyze_counts(wide, arm(1, 2, ArmRole::control)), std::invalid_argument);
  CountData mismatch = arm(1, 10, ArmRole::test);
  mismatch.shots = 11;
  EXPECT_THROW(analyze_counts(mismatch, arm(1, 2, ArmRole::control)), std::invalid_argument);
}

TEST(InferShots, Examples) {
  EXPECT_NEAR(static_cast<double>(infer_shots(0.4201, 0.0097)), 2590, 5);
  EXPECT_EQ(infer_shots(0.5, 0.05), 100u);
  EXPECT_NEAR(static_cast<double>(infer_shots(0.3287, 0.0092)), 2610, 5);
  EXPECT_THROW(infer_shots(0, 0.1), std::invalid_argument);
  EXPECT_THROW(infer_shots(1, 0.1), std::invalid_argument);
  EXPECT_THROW(infer_shots(0.5, 0), std::invalid_argument);
}

TEST(FitTau, ReferenceProportions) {
  const auto f = fit_tau(arm(4201, 10000, ArmRole::test), arm(3287, 10000, ArmRole::control), 50);
  EXPECT_EQ(f.status, TauFit::Status::ok);
  EXPECT_NEAR(f.ratio, 0.4665, 5e-4);
  EXPECT_NEAR(f.tau_us, 65.5, 0.1);
  EXPECT_NEAR(f.tau_us, -50 / std::log(0.0799 / 0.1713), 1e-9);
  EXPECT_GT(f.tau_err_us, 0.0);
  EXPECT_LT(f.ci_low_us, f.tau_us);
  EXPECT_GT(f.ci_high_us, f.tau_us);
}

TEST(FitTau, IntervalCoverageIsNominal) {
  // Pooled over 200 simulated runs the 95% interval should cover the true tau about 95% of the time.
  int covered = 0, runs = 0;
  for (double tau : {20.0, 50.0, 65.5, 100.0, 300.0}) {
    auto p = replication_params();
    ORSettings s;
    s.tau_us = tau;
    p.or_settings = s;
    for (std::uint64_t seed = 500; seed < 540; ++seed, ++runs) {
      const auto r = run_experiment(p, 100000, seed, 1);
      const auto f = fit_tau(r.test, r.control, 50);
      covered += f.ci_low_us <= tau && tau <= f.ci_high_us;
    }
  }
  const double rate = static_cast<double>(covered) / runs;
  EXPECT_GT(rate, 0.90);
  EXPECT_LT(rate, 0.99);
}

TEST(FitTau, AgreesWithPredictSweep) {
  // Find the tau whose predicted distance ratio matches, by bisection over predict.
  const auto f = fit_tau(arm(4201, 10000, ArmRole::test), arm(3287, 10000, ArmRole::control), 50);
  const double target = 0.0799 / 0.1713;
  const double baseline = std::abs(predict(replication_params()).probabilities[0] - 0.5);
  double lo = 1, hi = 1000;
  for (int i = 0; i < 100; ++i) {
    const double mid = std::sqrt(lo * hi);
    auto p = replication_params();
    ORSettings s;
    s.tau_us = mid;
    p.or_settings = s;
    const double ratio = std::abs(predict(p).probabilities[0] - 0.5) / baseline;
    (ratio < target ? lo : hi) = mid;
  }
  EXPECT_NEAR(f.tau_us, lo, 1e-6);
}

TEST(FitTau, NoSignalAndCompleteCollapse) {
  const auto same = fit_tau(arm(330, 1000, ArmRole::test), arm(330, 1000, ArmRole::control), 50);
  EXPECT_EQ(same.status, TauFit::Status::no_signal);
  EXPECT_TRUE(std::isinf(same.tau_us));
  const auto reversed = fit_tau(arm(300, 1000, ArmRole::test), arm(330, 1000, ArmRole::control), 50);
  EXPECT_EQ(reversed.status, TauFit::Status::no_signal);
  const auto flat = fit_tau(arm(500, 1000, ArmRole::test), arm(330, 1000, ArmRole::control), 50);
  EXPECT_EQ(flat.status, TauFit::Status::complete_collapse);
  EXPECT_EQ(flat.tau_us, 0.0);
  const auto opposite = fit_tau(arm(600, 1000, ArmRole::test), arm(330, 1000, ArmRole::control), 50);
  EXPECT_EQ(opposite.status, TauFit::Status::no_signal);
  const auto uniform_control = fit_tau(arm(400, 1000, ArmRole::test), arm(500, 1000, ArmRole::control), 50);
  EXPECT_EQ(uniform_control.status, TauFit::Status::no_signal);
  EXPECT_THROW(fit_tau(arm(1, 2, ArmRole::test), arm(1, 2, ArmRole::control), 0), std::invalid_argument);
}

TEST(ArmCounts, ExtractsClbit) {
  CountData joint;
  joint.role = ArmRole::joint;
  joint.shots = 10;
  joint.counts = {{"100", 3}, {"011", 4}, {"110", 3}};
  const auto t = arm_counts(joint, 2, ArmRole::test);
  EXPECT_EQ(t.count("1"), 6u);
  EXPECT_EQ(t.count("0"), 4u);
  const auto c = arm_counts(joint, 1, ArmRole::control);
  EXPECT_EQ(c.count("1"), 7u);
  EXPECT_THROW(arm_counts(joint, 3, ArmRole::test), std::invalid_argument);
}

TEST(RunExperiment, NullHypothesis) {
  const auto res = run_experiment(replication_params(), 100000, 17, 1);
  EXPECT_LT(std::abs(res.report.z), 3.0);
  EXPECT_EQ(res.test.shots, 100000u);
  EXPECT_EQ(res.control.shots, 100000u);
}

TEST(RunExperiment, RepetitionsPoolByRole) {
  auto p = replication_params();
  ORSettings s;
  s.tau_us = 20;
  p.or_settings = s;
  const auto res = run_experiment(p, 50000, 3, 2);
  ASSERT_EQ(res.raw.size(), 2u);
  EXPECT_EQ(res.test.shots, 100000u);
  EXPECT_EQ(res.control.shots, 100000u);
  EXPECT_EQ(res.test.role, ArmRole::test);
  // The OR arm ends up closer to 50:50 whichever physical qubit carried it.
  for (const auto& joint : res.raw) {
    const auto t = arm_counts(joint, kTestClbit, ArmRole::test);
    const auto c = arm_counts(joint, kControlClbit, ArmRole::control);
    EXPECT_LT(std::abs(static_cast<double>(t.count("1")) / 50000 - 0.5),
              std::abs(static_cast<double>(c.count("1")) / 50000 - 0.5));
  }
  // Same seed, same result.
  EXPECT_EQ(run_experiment(p, 50000, 3, 2).test, res.test);
  EXPECT_THROW(run_experiment(p, 10, 1, 0), std::invalid_argument);
}

TEST(RunExperiment, WorkingPointNearReferenceDistances) {
  auto p = replication_params();
  ORSettings s;
  s.tau_us = 65.5;
  p.or_settings = s;
  const auto r = run_experiment(p, 2590, 1, 1).report;
  const double se_t = std::hypot(r.test.se, 0.0097);
  const double se_c = std::hypot(r.control.se, 0.0092);
  EXPECT_NEAR(r.test.distance, 0.0799, 3 * se_t);
  EXPECT_NEAR(r.control.distance, 0.1713, 3 * se_c);
}

}  // namespace
}  // namespace orsim
