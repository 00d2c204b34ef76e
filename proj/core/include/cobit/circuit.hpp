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

// Boolean circuits lowered onto delegated NAND rounds and client-local XORs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobit/protocol.hpp"

namespace cobit {

using Bits = std::vector<std::uint8_t>;

enum class GateKind : std::uint8_t { kNand, kXor, kNot, kAnd, kOr };

std::string_view to_string(GateKind kind);

struct Gate {
  GateKind kind = GateKind::kNand;
  std::string out;
  std::string lhs;
  /// Empty for NOT.
  std::string rhs;
  /// Source line when parsed from a netlist, else 0.
  int line = 0;
};

struct BoolCircuit {
  static constexpr std::size_t kMaxInputs = 64;

  std::vector<std::string> inputs;
  std::vector<Gate> gates;
  std::vector<std::string> outputs;
};

class CircuitError : public std::runtime_error {
 public:
  CircuitError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Line-oriented netlist: `INPUT a b`, `OUTPUT y`, `y = GATE(x, z)`, `#`
/// comments. See docs/netlist.md. Throws CircuitError with the line number.
BoolCircuit parse_netlist(std::string_view text);
BoolCircuit load_netlist(const std::string& path);

/// Gate indices in dependency order. Throws CircuitError on duplicate or
/// undefined wires, cycles, or more than kMaxInputs inputs.
std::vector<std::size_t> topological_order(const BoolCircuit& circuit);

/// Direct evaluation. `inputs[i]` feeds circuit.inputs[i].
Bits reference_evaluate(const BoolCircuit& circuit, const Bits& inputs);

struct DelegatedNand {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::size_t out = 0;
};

struct LocalXor {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  std::size_t out = 0;
};

using PlanStep = std::variant<DelegatedNand, LocalXor>;

/// Wires 0..n_inputs-1 are the circuit inputs. Wire names stay with the
/// client; only (bit, bit) round requests ever leave it.
struct DelegationPlan {
  std::size_t n_inputs = 0;
  std::size_t n_wires = 0;
  /// Client-held constant 1, present only when NOT is lowered locally.
  std::optional<std::size_t> const_one;
  std::vector<PlanStep> steps;
  std::vector<std::size_t> outputs;

  std::size_t delegated_rounds() const;
  std::size_t local_xors() const;
};

struct LoweringOptions {
  /// Lower NOT(x) to the local XOR x ^ 1 instead of the delegated NAND(x, x).
  bool local_not = false;
};

/// NOT(x) -> NAND(x,x); AND -> NOT(NAND); OR(x,y) -> NAND(NOT x, NOT y);
/// XOR stays local; NAND is delegated.
DelegationPlan lower(const BoolCircuit& circuit, LoweringOptions options = {});

/// #NAND + #NOT + 2*#AND + 3*#OR.
std::size_t expected_round_count(const BoolCircuit& circuit);

/// Performs one delegated NAND round for the client.
using NandOracle = std::function<RoundResult(bool a, bool b)>;

/// Round oracle over run_round; round k uses derive_seed(base.seed, kSession, k).
NandOracle in_process_oracle(RoundConfig base);

struct EvalTrace {
  std::vector<RoundTranscript> rounds;
  /// Client-side wire values after the evaluation.
  Bits wires;
};

class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Runs the plan step by step. Throws EvaluationError carrying the failing
/// step index when a delegated round is inconclusive.
Bits evaluate_delegated(const DelegationPlan& plan, const Bits& inputs, const NandOracle& oracle,
                        EvalTrace* trace = nullptr);

}  // namespace cobit
