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

#include "orsim/dp_gravity.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace orsim::gravity {
namespace {

constexpr double kR = 1e-5;
constexpr double kM = 1e-12;

MassConfig point(std::size_t n, double m, double d) { return {n, m, d, Geometry::point, 0}; }
MassConfig sphere(double d, double r = kR, double m = kM) { return {1, m, d, Geometry::sphere, r}; }

// Closed form evaluated independently of the library: 12/5 G M^2/R - 2 G M^2/d.
double sphere_oracle(double d, double r, double m) {
  const double g = 6.674e-11;
  return 12.0 / 5.0 * g * m * m / r - 2.0 * g * m * m / d;
}

TEST(SelfEnergyPoint, TableCellEnergy) {
  const double e = self_energy_point(point(2, 1e-12, 1e-4));
  EXPECT_NEAR(e, 6.674e-11 * 4e-24 / 1e-4, 1e-42);
  EXPECT_NEAR(e / 1e-30, 2.67, 0.005);
}

TEST(SelfEnergyPoint, Scaling) {
  const double e = self_energy_point(point(2, 1e-12, 1e-4));
  EXPECT_NEAR(self_energy_point(point(4, 1e-12, 1e-4)) / e, 4.0, 1e-12);
  EXPECT_NEAR(self_energy_point(point(2, 2e-12, 1e-4)) / e, 4.0, 1e-12);
  EXPECT_NEAR(self_energy_point(point(2, 1e-12, 2e-4)) / e, 0.5, 1e-12);
  EXPECT_NEAR(self_energy_point(point(2, 1e-12, 7e-4)) * 7 / e, 1.0, 1e-12);
}

TEST(SelfEnergyPoint, Errors) {
  EXPECT_THROW(self_energy_point(sphere(3 * kR)), std::invalid_argument);
  EXPECT_THROW(self_energy_point(point(0, 1e-12, 1e-4)), std::invalid_argument);
  EXPECT_THROW(self_energy_point(point(2, -1, 1e-4)), std::invalid_argument);
  EXPECT_THROW(self_energy_point(point(2, 1e-12, 0)), std::invalid_argument);
}

TEST(SelfEnergySpheres, FarLimit) {
  const double e = self_energy_spheres(sphere(1e12 * kR));
  EXPECT_NEAR(e / (2.4 * kG * kM * kM / kR), 1.0, 1e-11);
}

TEST(SelfEnergySpheres, TouchingRatio) {
  const double touching = self_energy_spheres(sphere(2 * kR));
  const double far = 12.0 / 5.0 * kG * kM * kM / kR;
  EXPECT_NEAR(touching / (kG * kM * kM / kR), 1.4, 1e-12);
  EXPECT_NEAR(touching / far, 7.0 / 12.0, 1e-6);
}

TEST(SelfEnergySpheres, MatchesOracleFormula) {
  for (double k : {2.0, 2.5, 3.0, 10.0})
    EXPECT_NEAR(self_energy_spheres(sphere(k * kR)) / sphere_oracle(k * kR, kR, kM), 1.0, 1e-12);
}

TEST(SelfEnergySpheres, OverlapRejected) {
  EXPECT_THROW(self_energy_spheres(sphere(1.5 * kR)), std::invalid_argument);
  EXPECT_THROW(self_energy_spheres(point(1, kM, 1e-4)), std::invalid_argument);
}

TEST(Quadrature, IdenticalGridsGiveZero) {
  const auto s = displaced_spheres(12, kR, 3 * kR, kM);
  EXPECT_EQ(self_energy_quadrature(s.a, s.a, s.cell), 0.0);
}

TEST(Quadrature, SpheresAtThreeRadii) {
  const auto s = displaced_spheres(32, kR, 3 * kR, kM);
  EXPECT_NEAR(self_energy_quadrature(s.a, s.b, s.cell) / sphere_oracle(3 * kR, kR, kM), 1.0, 0.01);
}

TEST(Quadrature, SpheresAtFourRadii) {
  const auto s = displaced_spheres(32, kR, 4 * kR, kM);
  EXPECT_NEAR(self_energy_quadrature(s.a, s.b, s.cell) / sphere_oracle(4 * kR, kR, kM), 1.0, 0.02);
}

TEST(Quadrature, ConvergesUnderRefinement) {
  double previous = 1.0;
  for (std::size_t n : {12, 16, 20, 24, 28}) {
    const auto s = displaced_spheres(n, kR, 3 * kR, kM);
    const double err = std::abs(self_energy_quadrature(s.a, s.b, s.cell) / sphere_oracle(3 * kR, kR, kM) - 1);
    EXPECT_LT(err, previous) << "n = " << n;
    previous = err;
  }
}

TEST(Quadrature, Symmetric) {
  const auto s = displaced_spheres(16, kR, 2.5 * kR, kM);
  EXPECT_NEAR(self_energy_quadrature(s.a, s.b, s.cell) / self_energy_quadrature(s.b, s.a, s.cell), 1.0, 1e-12);
}

TEST(Quadrature, HandlesOverlappingSpheres) {
  const auto s = displaced_spheres(20, kR, kR, kM);
  const double e = self_energy_quadrature(s.a, s.b, s.cell);
  EXPECT_GT(e, 0.0);
  EXPECT_LT(e, self_energy_spheres(sphere(2 * kR)));
}

TEST(Quadrature, SingleCellMassesMatchPointEnergy) {
  MassGrid a(8, 1, 1), b(8, 1, 1);
  const double cell = 1e-5;
  a.at(1, 0, 0) = kM;
  b.at(6, 0, 0) = kM;
  const double d = 5 * cell;
  EXPECT_NEAR(mutual_energy_quadrature(a, b, cell) / self_energy_point(point(1, kM, d)), 1.0, 0.05);
}

TEST(Quadrature, Errors) {
  MassGrid a(4, 4, 4), b(4, 4, 4), c(4, 4, 2), empty(4, 4, 4);
  a.at(0, 0, 0) = 1;
  b.at(3, 3, 3) = 1.01;
  c.at(0, 0, 0) = 1;
  EXPECT_THROW(self_energy_quadrature(a, b, 1), std::invalid_argument);      // mass mismatch
  EXPECT_THROW(self_energy_quadrature(a, c, 1), std::invalid_argument);      // shape
  EXPECT_THROW(self_energy_quadrature(empty, empty, 1), std::invalid_argument);
  b.at(3, 3, 3) = 1.0005;
  EXPECT_NO_THROW(self_energy_quadrature(a, b, 1));
  EXPECT_THROW(self_energy_quadrature(a, a, 0), std::invalid_argument);
  b.at(0, 0, 1) = -0.5;
  EXPECT_THROW(self_energy_quadrature(a, b, 1), std::invalid_argument);
}

TEST(SphereGrid, HoldsExactMass) {
  const auto g = uniform_sphere_grid(10, 10, 10, 1e-6, {5e-6, 5e-6, 5e-6}, 3e-6, 2.5);
  EXPECT_NEAR(g.total(), 2.5, 1e-12);
  EXPECT_GT(g.at(5, 5, 5), 0.0);
  EXPECT_EQ(g.at(0, 0, 0), 0.0);
}

TEST(CollapseTime, TableCellNearFortyMicroseconds) {
  const double tau = collapse_time(self_energy_point(point(2, 1e-12, 1e-4)), kGammaTable);
  EXPECT_NEAR(tau, 1.0546e-34 / 2.6696e-30, 1e-12);
  EXPECT_NEAR(tau * 1e6, 40, 0.5);  // prints as 40 us at one significant figure
}

TEST(CollapseTime, SixteenBitCell) {
  // Exact 4x-per-doubling scaling from the 2-bit row.
  const double tau = collapse_time(self_energy_point(point(16, 1e-15, 1e-4)), kGammaTable);
  EXPECT_NEAR(tau, 0.6173, 5e-4);
}

TEST(CollapseTime, LimitsAndErrors) {
  EXPECT_LT(collapse_time(1e300, 1), 1e-299);
  EXPECT_THROW(collapse_time(0, 1), std::invalid_argument);
  EXPECT_THROW(collapse_time(-1, 1), std::invalid_argument);
  EXPECT_THROW(collapse_time(1, 0), std::invalid_argument);
  EXPECT_NEAR(collapse_time(2, 3) / collapse_time(1, 3), 0.5, 1e-15);
  EXPECT_NEAR(kGammaPenrose, 1 / (8 * std::numbers::pi), 1e-18);
}

TEST(Feasibility, Thresholds) {
  EXPECT_EQ(classify(10e-6), Feasibility::green);
  EXPECT_EQ(classify(100e-6), Feasibility::green);
  EXPECT_EQ(classify(50e-6), Feasibility::green);
  EXPECT_EQ(classify(100.1e-6), Feasibility::yellow);
  EXPECT_EQ(classify(500e-6), Feasibility::yellow);
  EXPECT_EQ(classify(500.1e-6), Feasibility::red);
  EXPECT_EQ(classify(9.99e-6), Feasibility::red);
  EXPECT_EQ(classify(40), Feasibility::red);
}

const std::vector<std::size_t> kBits{2, 4, 8, 16, 32, 64};
const std::vector<double> kMasses{1e-15, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10};

TEST(Fig1Table, ShapeAndExactScaling) {
  const auto t = fig1_table(kBits, kMasses, 1e-4, kGammaTable);
  ASSERT_EQ(t.cells.size(), 6u);
  for (std::size_t r = 0; r < 6; ++r) {
    ASSERT_EQ(t.cells[r].size(), 6u);
    for (std::size_t c = 0; c < 6; ++c) {
      if (c + 1 < 6) {
        EXPECT_NEAR(t.cells[r][c].tau_s / t.cells[r][c + 1].tau_s, 100.0, 1e-10);
      }
      if (r + 1 < 6) {
        EXPECT_NEAR(t.cells[r][c].tau_s / t.cells[r + 1][c].tau_s, 4.0, 1e-12);
      }
      const double nm = static_cast<double>(kBits[r]) * kMasses[c];
      EXPECT_NEAR(t.cells[r][c].tau_s * nm * nm / (1.0546e-34 * 1e-4 / 6.674e-11), 1.0, 1e-12);
    }
  }
}

TEST(Fig1Table, SingleGreenCell) {
  const auto t = fig1_table({2}, {1e-12}, 1e-4, kGammaTable);
  EXPECT_EQ(t.cells[0][0].feasibility, Feasibility::green);
  EXPECT_EQ(format_duration(t.cells[0][0].tau_s, 1), "40 us");
  EXPECT_EQ(format_duration(t.cells[0][0].tau_s, 3), "39.5 us");
}

TEST(Fig1Table, BottomRightCell) {
  const auto t = fig1_table({64}, {1e-10}, 1e-4, kGammaTable);
  EXPECT_EQ(t.cells[0][0].feasibility, Feasibility::red);
  EXPECT_NEAR(t.cells[0][0].tau_s * 1e12, 4, 0.5);
}

TEST(Fig1Table, GammaScalesLinearly) {
  const auto a = fig1_table(kBits, kMasses, 1e-4, 1.0);
  const auto b = fig1_table(kBits, kMasses, 1e-4, kGammaPenrose);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) EXPECT_NEAR(b.cells[r][c].tau_s / a.cells[r][c].tau_s, kGammaPenrose, 1e-15);
}

TEST(Fig1Table, Errors) {
  EXPECT_THROW(fig1_table({}, kMasses, 1e-4, 1), std::invalid_argument);
  EXPECT_THROW(fig1_table(kBits, {}, 1e-4, 1), std::invalid_argument);
  EXPECT_THROW(fig1_table(kBits, kMasses, 0, 1), std::invalid_argument);
}

TEST(TableOutput, CsvAndText) {
  const auto t = fig1_table({2, 4}, {1e-12}, 1e-4, kGammaTable);
  const auto csv = table_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "cell,tau_s,class");
  EXPECT_NE(csv.find("2bits@1e-12kg,3.9504e-05,green\n"), std::string::npos);
  EXPECT_NE(csv.find("4bits@1e-12kg,9.87601e-06,red\n"), std::string::npos);
  const auto text = table_to_text(t);
  EXPECT_NE(text.find("39.5 us [g]"), std::string::npos);
  EXPECT_NE(text.find("9.88 us [r]"), std::string::npos);
}

TEST(TableOutput, DurationUnits) {
  EXPECT_EQ(format_duration(39.5036, 3), "39.5 s");
  EXPECT_EQ(format_duration(0.25, 2), "250 ms");
  EXPECT_EQ(format_duration(3.86e-12, 3), "3.86 ps");
  EXPECT_EQ(format_duration(2e-17, 2), "0.020 fs");
  EXPECT_EQ(format_duration(0.9997, 3), "1.00 s");
  EXPECT_EQ(format_duration(650e-3, 2), "650 ms");
  EXPECT_EQ(format_fixed_sig(2.5, 2), "2.5");
}

}  // namespace
}  // namespace orsim::gravity
