// Copyright 2026 The Cobit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "cobit/plates.hpp"
#include "cobit/protocol.hpp"
#include "oracle.hpp"

namespace cobit {
namespace {

constexpr double kPi = std::numbers::pi;

double diff(const Operator2& m, const oracle::Mat& o) {
  double d = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(m(i, j) - o[i][j]));
  return d;
}

const Operator2 kJ(0, -1, 1, 0);

TEST(Hwp, Anchors) {
  EXPECT_LT(hwp(PlateAngle(0)).max_abs_diff(Operator2::pauli_z()), 1e-12);
  EXPECT_LT(hwp(PlateAngle(kPi / 8)).max_abs_diff(Operator2::hadamard()), 1e-12);
  EXPECT_LT(hwp(PlateAngle(kPi / 4)).max_abs_diff(Operator2::pauli_x()), 1e-12);
}

TEST(Hwp, MatchesOracle) {
  for (double a : {-1.3, -0.2, 0.0, 0.4, 1.5, 3.0}) {
    EXPECT_LT(diff(hwp(PlateAngle(a)), oracle::plate(a)), 1e-12) << a;
  }
}

TEST(PlateAngle, Canonicalized) {
  EXPECT_DOUBLE_EQ(PlateAngle(kPi).radians(), 0.0);
  EXPECT_NEAR(PlateAngle(-kPi / 2).radians(), kPi / 2, 1e-15);
  EXPECT_NEAR(PlateAngle(3 * kPi / 4).radians(), -kPi / 4, 1e-15);
  Rng rng(1);
  std::uniform_real_distribution<double> ang(-20, 20);
  for (int i = 0; i < 100; ++i) {
    const double a = ang(rng);
    const PlateAngle p(a);
    EXPECT_GT(p.radians(), -kPi / 2);
    EXPECT_LE(p.radians(), kPi / 2);
    // Plates are periodic in pi, so canonicalization never changes the operator.
    EXPECT_LT(diff(hwp(p), oracle::plate(a)), 1e-12);
  }
  EXPECT_THROW(PlateAngle(std::nan("")), std::invalid_argument);
}

TEST(CompileNand, Examples) {
  auto angles = [](bool a, bool b, bool r) {
    const auto p = compile_nand_program({a, b, r});
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[i] = p.plates[i].radians();
    return out;
  };
  EXPECT_EQ(angles(0, 0, 0), (std::array<double, 4>{0, 0, 0, 0}));
  const auto p111 = angles(1, 1, 1);
  EXPECT_DOUBLE_EQ(p111[0], kPi / 8);
  EXPECT_DOUBLE_EQ(p111[1], -kPi / 8);
  EXPECT_DOUBLE_EQ(p111[2], 0.0);
  EXPECT_DOUBLE_EQ(p111[3], kPi / 4);
  const auto p100 = angles(1, 0, 0);
  EXPECT_DOUBLE_EQ(p100[0], kPi / 8);
  EXPECT_DOUBLE_EQ(p100[1], 0.0);
  EXPECT_DOUBLE_EQ(p100[2], -kPi / 8);
  EXPECT_DOUBLE_EQ(p100[3], 0.0);
}

TEST(CumulativeOperator, Examples) {
  EXPECT_LT(cumulative_operator(compile_nand_program({0, 0, 0})).max_abs_diff(Operator2::identity()),
            1e-12);
  EXPECT_LT(cumulative_operator(compile_nand_program({1, 1, 1})).max_abs_diff(Operator2::identity()),
            1e-12);
  const Operator2 m = cumulative_operator(compile_nand_program({0, 0, 1}));
  EXPECT_TRUE(equal_up_to_global_phase(apply(m, basis_state(0)), basis_state(1)));
}

TEST(CumulativeOperator, LastPlateLeftmost) {
  const std::array<PlateAngle, 2> plates{PlateAngle(0), PlateAngle(kPi / 8)};
  EXPECT_LT(cumulative_operator(plates).max_abs_diff(Operator2::hadamard() * Operator2::pauli_z()),
            1e-12);
}

TEST(CumulativeOperator, AllTriplesMatchOracle) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r) {
        const Operator2 m = cumulative_operator(compile_nand_program({a == 1, b == 1, r == 1}));
        EXPECT_LT(diff(m, oracle::nand_program(a, b, r)), 1e-12);
      }
}

TEST(ThreePlate, PhaseClaim) {
  EXPECT_LT(three_plate_nand(0, 0).max_abs_diff(Operator2::pauli_z()), 1e-12);
  EXPECT_LT(three_plate_nand(0, 1).max_abs_diff(Operator2::pauli_z()), 1e-12);
  EXPECT_LT(three_plate_nand(1, 0).max_abs_diff(Operator2::pauli_z()), 1e-12);
  EXPECT_TRUE(equal_up_to_global_phase(apply(three_plate_nand(1, 1), basis_state(0)),
                                       basis_state(1)));
}

TEST(ThreePlate, MatchesOracle) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      constexpr double th = kPi / 8;
      oracle::Mat m = oracle::plate(th * a);
      m = oracle::mul(oracle::plate(-th * b), m);
      m = oracle::mul(oracle::plate(-th * (a ^ b)), m);
      EXPECT_LT(diff(three_plate_nand(a, b), m), 1e-12);
    }
}

TEST(GlobalSign, OneOneZeroVersusZeroZeroOne) {
  const CobitState s110 = apply(cumulative_operator(compile_nand_program({1, 1, 0})), basis_state(0));
  const CobitState s001 = apply(cumulative_operator(compile_nand_program({0, 0, 1})), basis_state(0));
  EXPECT_TRUE(equal_up_to_global_phase(s110, s001));
  // The oracle shows the two outputs differ by exactly -1.
  const auto v110 = oracle::mul(oracle::nand_program(1, 1, 0), oracle::Vec{1, 0});
  const auto v001 = oracle::mul(oracle::nand_program(0, 0, 1), oracle::Vec{1, 0});
  EXPECT_LT(std::abs(v110[1] + v001[1]), 1e-12);
}

// Properties.

TEST(PlateProperties, InvolutionAndDeterminant) {
  Rng rng(2);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const Operator2 h = hwp(PlateAngle(ang(rng)));
    EXPECT_LT((h * h).max_abs_diff(Operator2::identity()), 1e-12);
    EXPECT_LT(std::abs(h.determinant() + 1.0), 1e-12);
    EXPECT_TRUE(h.is_unitary());
  }
}

TEST(PlateProperties, PadStructure) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Operator2 m0 = cumulative_operator(compile_nand_program({a == 1, b == 1, false}));
      const Operator2 m1 = cumulative_operator(compile_nand_program({a == 1, b == 1, true}));
      const bool direct =
          equal_up_to_global_phase(m0, Operator2::identity()) && equal_up_to_global_phase(m1, kJ);
      const bool swapped =
          equal_up_to_global_phase(m0, kJ) && equal_up_to_global_phase(m1, Operator2::identity());
      EXPECT_TRUE(direct != swapped) << a << b;
    }
}

TEST(PlateProperties, CorrectnessLinkage) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int r = 0; r < 2; ++r) {
        const CobitState out =
            apply(cumulative_operator(compile_nand_program({a == 1, b == 1, r == 1})), basis_state(0));
        // Deterministic outcome: the output is a basis state.
        ASSERT_TRUE(out.prob0() > 1 - 1e-12 || out.prob1() > 1 - 1e-12);
        const int s = out.prob1() > 0.5 ? 1 : 0;
        EXPECT_EQ((s ^ 1 ^ r) == 1, nand(a, b)) << a << b << r;
        // Zero rotation exactly when s = 0.
        EXPECT_EQ(s == 0, out.prob0() > 0.5);
      }
}

}  // namespace
}  // namespace cobit
