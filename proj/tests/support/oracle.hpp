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

// Independent 2x2 oracle for tests: plain arrays, written from the Jones
// formulas directly, sharing nothing with the library's operator types.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using C = std::complex<double>;
using Mat = std::array<std::array<C, 2>, 2>;
using Vec = std::array<C, 2>;

inline Mat mul(const Mat& x, const Mat& y) {
  Mat out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return out;
}

inline Vec mul(const Mat& m, const Vec& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

inline Mat eye() { return {{{1, 0}, {0, 1}}}; }
inline Mat x_gate() { return {{{0, 1}, {1, 0}}}; }
inline Mat z_gate() { return {{{1, 0}, {0, -1}}}; }

inline Mat plate(double alpha) {
  const double c = std::cos(2 * alpha), s = std::sin(2 * alpha);
  return {{{c, s}, {s, -c}}};
}

inline Mat rot_y(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {{{c, -s}, {s, c}}};
}

inline Mat dag(const Mat& m) {
  return {{{std::conj(m[0][0]), std::conj(m[1][0])}, {std::conj(m[0][1]), std::conj(m[1][1])}}};
}

// Plates in application order a, -b, -(a^b), r; the product puts the last
// one leftmost.
inline Mat nand_program(int a, int b, int r) {
  constexpr double th = std::numbers::pi / 8, ph = std::numbers::pi / 4;
  Mat m = plate(th * a);
  m = mul(plate(-th * b), m);
  m = mul(plate(-th * (a ^ b)), m);
  return mul(plate(ph * r), m);
}

inline Mat abstract_map(int a, int b, int r) {
  const Mat u = rot_y(std::numbers::pi / 2);
  Mat m = eye();
  if (a) m = mul(u, m);
  if (b) m = mul(u, m);
  if (a ^ b) m = mul(dag(u), m);
  if (r) m = mul(x_gate(), m);
  return m;
}

inline double prob1(const Vec& v) { return std::norm(v[1]) / (std::norm(v[0]) + std::norm(v[1])); }

inline double max_diff(const Mat& x, const Mat& y) {
  double d = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(x[i][j] - y[i][j]));
  return d;
}

// |<u|v>| for normalized vectors.
inline double overlap(const Vec& u, const Vec& v) {
  return std::abs(std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1]);
}

// Binomial upper tail P[X >= k], X ~ Bin(n, p), in log space.
inline double binomial_tail(int n, int k, double p) {
  double total = 0;
  for (int i = k; i <= n; ++i) {
    const double lg = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                      i * std::log(p) + (n - i) * std::log1p(-p);
    total += std::exp(lg);
  }
  return total;
}

}  // namespace oracle
