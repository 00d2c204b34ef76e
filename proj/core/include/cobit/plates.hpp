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

// Half-wave-plate operators and the client's secure four-plate NAND program.

#pragma once

#include <array>
#include <numbers>
#include <span>

#include "cobit/state.hpp"

namespace cobit {

/// Gate angle; its NAND plates sit at 0 or +-kNandPlateAngle.
inline constexpr double kNandPlateAngle = std::numbers::pi / 8.0;
/// Pad angle; the last plate sits at 0 (phase flip) or kPadPlateAngle (bit flip).
inline constexpr double kPadPlateAngle = std::numbers::pi / 4.0;

/// Fast-axis orientation of a half-wave plate, canonicalized to (-pi/2, pi/2].
class PlateAngle {
 public:
  constexpr PlateAngle() = default;
  explicit PlateAngle(double radians);

  double radians() const { return radians_; }

  friend bool operator==(const PlateAngle&, const PlateAngle&) = default;

 private:
  double radians_ = 0.0;
};

struct ClientInputs {
  bool a = false;
  bool b = false;
  bool r = false;
};

/// Plates in application order (first element acts first).
struct PlateProgram {
  std::array<PlateAngle, 4> plates{};
};

/// Jones matrix [[cos 2a, sin 2a], [sin 2a, -cos 2a]].
Operator2 hwp(PlateAngle angle);

/// [theta*a, -theta*b, -theta*(a^b), phi*r]. A zero exponent leaves the plate
/// in the beam at angle 0, where it acts as sigma_z.
PlateProgram compile_nand_program(const ClientInputs& inputs);

/// Ordered product of the plates, last plate leftmost.
Operator2 cumulative_operator(std::span<const PlateAngle> plates);
Operator2 cumulative_operator(const PlateProgram& program);

/// Unpadded three-plate NAND sequence (the first three plates of the program).
Operator2 three_plate_nand(bool a, bool b);

}  // namespace cobit
