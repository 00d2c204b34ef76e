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

// Two-level coherent states ("cobits"), 2x2 operators and density matrices.
//
// A cobit is a normalized Jones vector over the {|0>, |1>} polarization basis
// (horizontal / vertical). All values are immutable after construction and all
// operations are pure; randomness is always supplied by the caller.

#pragma once

#include <array>
#include <complex>
#include <random>
#include <span>
#include <string>

namespace cobit {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

/// Tolerance for exact algebraic identities (unitarity, norms, trace).
inline constexpr double kAlgebraTol = 1e-12;

class CobitState {
 public:
  /// |0>.
  CobitState() = default;

  /// Normalizes (amp0, amp1). Throws std::invalid_argument on a zero or
  /// non-finite vector.
  static CobitState normalized(Complex amp0, Complex amp1);

  Complex amp0() const { return amp0_; }
  Complex amp1() const { return amp1_; }

  double prob0() const { return std::norm(amp0_); }
  double prob1() const { return std::norm(amp1_); }
  double norm() const;

  /// Same state times exp(i*phase).
  CobitState with_global_phase(double phase) const;

  /// Representative of the phase class: the larger-magnitude amplitude
  /// (amp0 on ties) is made real and non-negative.
  CobitState canonical_phase() const;

  std::string str() const;

  friend bool operator==(const CobitState&, const CobitState&) = default;

 private:
  CobitState(Complex amp0, Complex amp1) : amp0_(amp0), amp1_(amp1) {}

  Complex amp0_{1.0, 0.0};
  Complex amp1_{0.0, 0.0};
};

/// Row-major 2x2 complex matrix.
class Operator2 {
 public:
  constexpr Operator2() = default;
  Operator2(Complex m00, Complex m01, Complex m10, Complex m11)
      : m_{m00, m01, m10, m11} {}

  static Operator2 identity();
  static Operator2 pauli_x();
  static Operator2 pauli_y();
  static Operator2 pauli_z();
  static Operator2 hadamard();
  /// Polarization rotation by `angle`: [[cos, -sin], [sin, cos]] = ry(2*angle).
  static Operator2 rotation(double angle);

  Complex operator()(int row, int col) const { return m_[2 * row + col]; }

  Operator2 dagger() const;
  Complex determinant() const;
  Complex trace() const;
  bool is_unitary(double tol = kAlgebraTol) const;

  /// Max-norm distance between entries.
  double max_abs_diff(const Operator2& other) const;

  /// Raw matrix-vector product, no unitarity check or renormalization.
  std::array<Complex, 2> act(const CobitState& s) const;

  friend Operator2 operator*(const Operator2& lhs, const Operator2& rhs);
  friend Operator2 operator*(Complex scalar, const Operator2& op);

  std::string str() const;

 private:
  std::array<Complex, 4> m_{};
};

class DensityMatrix {
 public:
  /// I/2.
  static DensityMatrix maximally_mixed();
  static DensityMatrix pure(const CobitState& s);
  /// Uniform mixture of the given pure states.
  static DensityMatrix uniform_mixture(std::span<const CobitState> states);

  /// Accepts an explicit matrix; throws std::invalid_argument unless it is
  /// Hermitian, unit-trace and positive semidefinite within `tol`.
  static DensityMatrix from_entries(Complex r00, Complex r01, Complex r10, Complex r11,
                                    double tol = 1e-9);

  Complex operator()(int row, int col) const { return m_[2 * row + col]; }

  bool is_valid(double tol = kAlgebraTol) const;
  double max_abs_diff(const DensityMatrix& other) const;

  std::string str() const;

 private:
  DensityMatrix(Complex r00, Complex r01, Complex r10, Complex r11) : m_{r00, r01, r10, r11} {}
  std::array<Complex, 4> m_{};
};

CobitState basis_state(int bit);

/// exp(-i * theta/2 * sigma_y).
Operator2 ry(double theta);

/// Matrix-vector product. Throws std::invalid_argument if `op` is not unitary
/// within 1e-9; the result is renormalized only to absorb rounding drift.
CobitState apply(const Operator2& op, const CobitState& state);

/// Computational-basis measurement: 1 with probability |amp1|^2.
int measure_z(const CobitState& state, Rng& rng);

/// True iff |<s1|s2>| >= 1 - tol.
bool equal_up_to_global_phase(const CobitState& s1, const CobitState& s2,
                              double tol = kAlgebraTol);

/// True iff rhs = c * lhs for some unit-modulus c (both unitary).
bool equal_up_to_global_phase(const Operator2& lhs, const Operator2& rhs,
                              double tol = kAlgebraTol);

/// The unit-modulus c with rhs = c * lhs, assuming equal_up_to_global_phase.
Complex relative_phase(const Operator2& lhs, const Operator2& rhs);

/// (1/2) * sum |eigenvalues(r1 - r2)|.
double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2);

}  // namespace cobit
