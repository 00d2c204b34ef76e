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

#include "cobit/plates.hpp"

#include <cmath>
#include <stdexcept>

namespace cobit {

PlateAngle::PlateAngle(double radians) {
  if (!std::isfinite(radians)) throw std::invalid_argument("PlateAngle: angle must be finite");
  constexpr double pi = std::numbers::pi;
  // Reduce into (-pi/2, pi/2]; hwp() has period pi.
  double r = std::remainder(radians, pi);
  if (r <= -pi / 2) r += pi;
  radians_ = r;
}

Operator2 hwp(PlateAngle angle) {
  const double c = std::cos(2.0 * angle.radians());
  const double s = std::sin(2.0 * angle.radians());
  return {c, s, s, -c};
}

PlateProgram compile_nand_program(const ClientInputs& in) {
  const double theta = kNandPlateAngle;
  const bool parity = in.a != in.b;
  return PlateProgram{{
      PlateAngle(in.a ? theta : 0.0),
      PlateAngle(in.b ? -theta : 0.0),
      PlateAngle(parity ? -theta : 0.0),
      PlateAngle(in.r ? kPadPlateAngle : 0.0),
  }};
}

Operator2 cumulative_operator(std::span<const PlateAngle> plates) {
  Operator2 acc = Operator2::identity();
  for (const PlateAngle& p : plates) acc = hwp(p) * acc;
  return acc;
}

Operator2 cumulative_operator(const PlateProgram& program) {
  return cumulative_operator(std::span<const PlateAngle>(program.plates));
}

Operator2 three_plate_nand(bool a, bool b) {
  const PlateProgram program = compile_nand_program({a, b, false});
  return cumulative_operator(std::span<const PlateAngle>(program.plates).first(3));
}

}  // namespace cobit
