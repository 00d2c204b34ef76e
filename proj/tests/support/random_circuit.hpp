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

// Random acyclic circuits over the full gate vocabulary, for tests.

#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "cobit/circuit.hpp"

namespace testing_support {

inline cobit::BoolCircuit random_circuit(std::mt19937_64& rng, std::size_t n_inputs,
                                         std::size_t n_gates) {
  cobit::BoolCircuit c;
  std::vector<std::string> wires;
  for (std::size_t i = 0; i < n_inputs; ++i) {
    c.inputs.push_back("x" + std::to_string(i));
    wires.push_back(c.inputs.back());
  }
  std::uniform_int_distribution<int> kind(0, 4);
  for (std::size_t g = 0; g < n_gates; ++g) {
    std::uniform_int_distribution<std::size_t> pick(0, wires.size() - 1);
    cobit::Gate gate;
    gate.kind = static_cast<cobit::GateKind>(kind(rng));
    gate.out = "w" + std::to_string(g);
    gate.lhs = wires[pick(rng)];
    if (gate.kind != cobit::GateKind::kNot) gate.rhs = wires[pick(rng)];
    c.gates.push_back(gate);
    wires.push_back(gate.out);
  }
  // Last gate plus a few random internal wires.
  c.outputs.push_back(wires.back());
  std::uniform_int_distribution<std::size_t> any(n_inputs, wires.size() - 1);
  for (int k = 0; k < 2; ++k) c.outputs.push_back(wires[any(rng)]);
  // Declaration order need not be dependency order.
  std::shuffle(c.gates.begin(), c.gates.end(), rng);
  return c;
}

inline cobit::Bits bits_of(std::uint64_t x, std::size_t n) {
  cobit::Bits out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>((x >> i) & 1U);
  return out;
}

}  // namespace testing_support
