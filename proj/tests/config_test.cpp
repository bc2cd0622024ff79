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

#include "orsim/config.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace orsim::config {
namespace {

std::string repo(const std::string& rel) { return std::string(ORSIM_REPO_ROOT) + "/" + rel; }

/// The line-anchored message of a rejected config.
std::string error_of(const std::string& text, int* line = nullptr) {
  try {
    parse_config(text, "cfg.yaml");
  } catch (const ConfigError& e) {
    if (line) *line = e.line();
    return e.what();
  }
  return "";
}

TEST(Config, ShippedReplication) {
  const auto cfg = load_config(repo("configs/replication.yaml"));
  const auto& p = cfg.protocol;
  EXPECT_EQ(p.delay_us, 50.0);
  EXPECT_EQ(p.channel_mode, ChannelMode::paper);
  ASSERT_TRUE(p.coherence_injection);
  EXPECT_EQ(*p.coherence_injection, 0.25);
  EXPECT_EQ(p.noise.t1, 300.0);
  EXPECT_EQ(p.noise.t2, 150.0);
  EXPECT_FALSE(p.or_settings);
  EXPECT_EQ(cfg.run.shots, 2590u);
  EXPECT_EQ(cfg.run.seed, 1u);
  EXPECT_EQ(cfg.run.repetitions, 1u);
}

TEST(Config, ShippedCollapse) {
  const auto cfg = load_config(repo("configs/or_65us.yaml"));
  ASSERT_TRUE(cfg.protocol.or_settings);
  EXPECT_EQ(cfg.protocol.or_settings->tau_us, 65.5);
  EXPECT_EQ(cfg.protocol.channel_mode, ChannelMode::kraus);
  EXPECT_EQ(cfg.run.repetitions, 2u);
}

TEST(Config, Defaults) {
  const auto cfg = parse_config("noise: {t1_us: 100, t2_us: 80}\n");
  EXPECT_EQ(cfg.protocol.delay_us, ProtocolParams{}.delay_us);
  EXPECT_NEAR(cfg.protocol.cry_angle, std::numbers::pi / 4, 1e-15);
  EXPECT_FALSE(cfg.protocol.coherence_injection);
  EXPECT_FALSE(cfg.protocol.swap_roles);
  EXPECT_EQ(cfg.protocol.c2_readout, FinalReadout::test_qubit);
}

TEST(Config, MissingT1NamesFieldAndLine) {
  int line = 0;
  const auto msg = error_of("protocol:\n  delay_us: 50\nnoise:\n  t2_us: 150\n", &line);
  EXPECT_NE(msg.find("noise.t1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cfg.yaml:4"), std::string::npos) << msg;
  EXPECT_EQ(line, 4);
}

TEST(Config, MissingNoiseSection) {
  EXPECT_NE(error_of("protocol: {delay_us: 5}\n").find("noise"), std::string::npos);
}

TEST(Config, UnknownKeyRejected) {
  int line = 0;
  const auto msg = error_of("noise:\n  t1_us: 100\n  t2_us: 80\n  t3_us: 1\n", &line);
  EXPECT_NE(msg.find("noise.t3_us"), std::string::npos) << msg;
  EXPECT_EQ(line, 4);
  EXPECT_NE(error_of("noise: {t1_us: 1, t2_us: 1}\nextras: 1\n").find("extras"), std::string::npos);
}

TEST(Config, ValueChecks) {
  const std::string noise = "noise: {t1_us: 100, t2_us: 80}\n";
  EXPECT_NE(error_of("noise: {t1_us: 100, t2_us: 250}\n"), "");  // T2 > 2 T1
  EXPECT_NE(error_of("noise: {t1_us: -1, t2_us: 1}\n"), "");
  EXPECT_NE(error_of("noise: {t1_us: abc, t2_us: 1}\n").find("a number"), std::string::npos);
  EXPECT_NE(error_of(noise + "protocol: {delay_us: -1}\n"), "");
  EXPECT_NE(error_of(noise + "protocol: {channel_mode: lindblad}\n"), "");
  EXPECT_NE(error_of(noise + "protocol: {coherence_injection: 0.7}\n"), "");
  EXPECT_NE(error_of(noise + "protocol: {c2_readout: ancilla}\n"), "");
  EXPECT_NE(error_of(noise + "or: {tau_us: 0}\n"), "");
  EXPECT_NE(error_of(noise + "or: {gamma: 2}\n"), "");
  EXPECT_NE(error_of(noise + "or: {tau_us: 5, bits: 2, mass_per_bit_kg: 1, separation_m: 1}\n"), "");
  EXPECT_NE(error_of(noise + "or: {bits: 2, mass_per_bit_kg: 1e-12}\n").find("or.separation_m"), std::string::npos);
  EXPECT_NE(error_of(noise + "or: {bits: 2, mass_per_bit_kg: 1e-12, separation_m: 0}\n"), "");
  EXPECT_NE(error_of(noise + "run: {shots: 0}\n"), "");
  EXPECT_NE(error_of(noise + "run: {repetitions: 0}\n"), "");
  EXPECT_NE(error_of("noise: [1, 2]\n"), "");
  EXPECT_NE(error_of("noise: {t1_us: 1\n"), "");
  EXPECT_NE(error_of("- 1\n"), "");
}

TEST(Config, GeometryComputesTau) {
  const auto cfg = parse_config(
      "noise: {t1_us: 300, t2_us: 150}\n"
      "or: {bits: 2, mass_per_bit_kg: 1.0e-12, separation_m: 1.0e-4, gamma: 2, coupled_qubits: [0, 1]}\n");
  ASSERT_TRUE(cfg.protocol.or_settings);
  const auto& s = *cfg.protocol.or_settings;
  // Independent: gamma hbar d / (G M^2), M = 2e-12 kg.
  const double hbar = 1.0546e-34, g = 6.674e-11;
  const double expected_us = 2 * hbar * 1e-4 / (g * 4e-24) * 1e6;
  EXPECT_NEAR(s.tau_us / expected_us, 1.0, 1e-12);
  EXPECT_EQ(s.gamma, 2.0);
  EXPECT_EQ(s.coupled_qubits, (std::set<std::size_t>{0, 1}));
}

TEST(Config, PerQubitOverrides) {
  const auto cfg = parse_config("noise:\n  t1_us: 300\n  t2_us: 150\n  qubits:\n    2: {t1_us: 200, t2_us: 90}\n");
  EXPECT_EQ(cfg.protocol.noise_for(2).t1, 200.0);
  EXPECT_EQ(cfg.protocol.noise_for(0).t1, 300.0);
  int line = 0;
  error_of("noise:\n  t1_us: 300\n  t2_us: 150\n  qubits:\n    2: {t1_us: 200}\n", &line);
  EXPECT_EQ(line, 5);
}

TEST(Config, ApplyCalibration) {
  ProtocolParams p;
  apply_calibration(p, {{0, {280, 140, "t"}}, {3, {310, 200, ""}}});
  EXPECT_EQ(p.noise_for(0).t1, 280.0);
  EXPECT_EQ(p.noise_for(3).t2, 200.0);
  EXPECT_EQ(p.noise_for(1).t1, p.noise.t1);
  // Bridge snapshots may carry T2 > 2 T1; the simulator refuses them.
  EXPECT_THROW(apply_calibration(p, {{1, {100, 250, ""}}}), std::invalid_argument);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config(repo("configs/absent.yaml")), ConfigError);
}

}  // namespace
}  // namespace orsim::config
