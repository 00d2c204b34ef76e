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

#include "cobit/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cobit {
namespace {

std::string complex_str(Complex c) {
  std::ostringstream out;
  out.precision(6);
  out << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return out.str();
}

// Eigenvalues of a 2x2 Hermitian matrix [[p, q], [conj(q), s]].
std::array<double, 2> hermitian_eigenvalues(double p, Complex q, double s) {
  const double mean = 0.5 * (p + s);
  const double half_gap = std::hypot(0.5 * (p - s), std::abs(q));
  return {mean - half_gap, mean + half_gap};
}

}  // namespace

CobitState CobitState::normalized(Complex amp0, Complex amp1) {
  const double n = std::sqrt(std::norm(amp0) + std::norm(amp1));
  if (!std::isfinite(n) || n == 0.0) {
    throw std::invalid_argument("CobitState: amplitudes must be finite and not both zero");
  }
  return CobitState(amp0 / n, amp1 / n);
}

double CobitState::norm() const { return std::sqrt(std::norm(amp0_) + std::norm(amp1_)); }

CobitState CobitState::with_global_phase(double phase) const {
  const Complex c = std::polar(1.0, phase);
  return CobitState(c * amp0_, c * amp1_);
}

CobitState CobitState::canonical_phase() const {
  const Complex pivot = std::abs(amp0_) >= std::abs(amp1_) ? amp0_ : amp1_;
  const Complex c = std::conj(pivot) / std::abs(pivot);
  return CobitState(c * amp0_, c * amp1_);
}

std::string CobitState::str() const {
  return "(" + complex_str(amp0_) + ", " + complex_str(amp1_) + ")";
}

Operator2 Operator2::identity() { return {1.0, 0.0, 0.0, 1.0}; }
Operator2 Operator2::pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Operator2 Operator2::pauli_y() { return {0.0, Complex(0, -1), Complex(0, 1), 0.0}; }
Operator2 Operator2::pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Operator2 Operator2::hadamard() {
  const double h = 1.0 / std::numbers::sqrt2;
  return {h, h, h, -h};
}

Operator2 Operator2::rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

Operator2 Operator2::dagger() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

Complex Operator2::determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

Complex Operator2::trace() const { return m_[0] + m_[3]; }

bool Operator2::is_unitary(double tol) const {
  return (*this * dagger()).max_abs_diff(identity()) <= tol;
}

double Operator2::max_abs_diff(const Operator2& other) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(m_[i] - other.m_[i]));
  return worst;
}

std::array<Complex, 2> Operator2::act(const CobitState& s) const {
  return {m_[0] * s.amp0() + m_[1] * s.amp1(), m_[2] * s.amp0() + m_[3] * s.amp1()};
}

Operator2 operator*(const Operator2& lhs, const Operator2& rhs) {
  const auto& a = lhs.m_;
  const auto& b = rhs.m_;
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Operator2 operator*(Complex scalar, const Operator2& op) {
  const auto& a = op.m_;
  return {scalar * a[0], scalar * a[1], scalar * a[2], scalar * a[3]};
}

std::string Operator2::str() const {
  return "[[" + complex_str(m_[0]) + ", " + complex_str(m_[1]) + "], [" + complex_str(m_[2]) +
         ", " + complex_str(m_[3]) + "]]";
}

DensityMatrix DensityMatrix::maximally_mixed() { return {0.5, 0.0, 0.0, 0.5}; }

DensityMatrix DensityMatrix::pure(const CobitState& s) {
  const Complex a = s.amp0();
  const Complex b = s.amp1();
  return {a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b)};
}

DensityMatrix DensityMatrix::uniform_mixture(std::span<const CobitState> states) {
  if (states.empty()) throw std::invalid_argument("uniform_mixture: no states");
  std::array<Complex, 4> acc{};
  for (const auto& s : states) {
    const auto p = pure(s);
    for (std::size_t i = 0; i < 4; ++i) acc[i] += p.m_[i];
  }
  const double w = 1.0 / static_cast<double>(states.size());
  return {w * acc[0], w * acc[1], w * acc[2], w * acc[3]};
}

DensityMatrix DensityMatrix::from_entries(Complex r00, Complex r01, Complex r10, Complex r11,
                                          double tol) {
  DensityMatrix rho(r00, r01, r10, r11);
  if (!rho.is_valid(tol)) throw std::invalid_argument("DensityMatrix: not a valid density matrix");
  return rho;
}

bool DensityMatrix::is_valid(double tol) const {
  const bool hermitian = std::abs(m_[1] - std::conj(m_[2])) <= tol &&
                         std::abs(m_[0].imag()) <= tol && std::abs(m_[3].imag()) <= tol;
  if (!hermitian) return false;
  if (std::abs(m_[0].real() + m_[3].real() - 1.0) > tol) return false;
  const auto eig = hermitian_eigenvalues(m_[0].real(), m_[1], m_[3].real());
  return eig[0] >= -tol;
}

double DensityMatrix::max_abs_diff(const DensityMatrix& other) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(m_[i] - other.m_[i]));
  return worst;
}

std::string DensityMatrix::str() const {
  return "[[" + complex_str(m_[0]) + ", " + complex_str(m_[1]) + "], [" + complex_str(m_[2]) +
         ", " + complex_str(m_[3]) + "]]";
}

CobitState basis_state(int bit) {
  if (bit == 0) return CobitState::normalized(1.0, 0.0);
  if (bit == 1) return CobitState::normalized(0.0, 1.0);
  throw std::invalid_argument("basis_state: bit must be 0 or 1");
}

Operator2 ry(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("ry: angle must be finite");
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return {c, -s, s, c};
}

CobitState apply(const Operator2& op, const CobitState& state) {
  if (!op.is_unitary(1e-9)) throw std::invalid_argument("apply: operator is not unitary");
  const auto v = op.act(state);
  return CobitState::normalized(v[0], v[1]);
}

int measure_z(const CobitState& state, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < state.prob1() ? 1 : 0;
}

bool equal_up_to_global_phase(const CobitState& s1, const CobitState& s2, double tol) {
  const Complex overlap = std::conj(s1.amp0()) * s2.amp0() + std::conj(s1.amp1()) * s2.amp1();
  return std::abs(overlap) >= 1.0 - tol;
}

bool equal_up_to_global_phase(const Operator2& lhs, const Operator2& rhs, double tol) {
  // For unitaries |tr(A^dag B)| / 2 == 1 exactly when B = cA.
  return std::abs((lhs.dagger() * rhs).trace()) / 2.0 >= 1.0 - tol;
}

Complex relative_phase(const Operator2& lhs, const Operator2& rhs) {
  const Complex t = (lhs.dagger() * rhs).trace();
  return t / std::abs(t);
}

double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  const Complex d00 = r1(0, 0) - r2(0, 0);
  const Complex d01 = r1(0, 1) - r2(0, 1);
  const Complex d11 = r1(1, 1) - r2(1, 1);
  const auto eig = hermitian_eigenvalues(d00.real(), d01, d11.real());
  return 0.5 * (std::abs(eig[0]) + std::abs(eig[1]));
}

}  // namespace cobit
