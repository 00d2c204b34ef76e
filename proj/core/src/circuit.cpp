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

#include "cobit/circuit.hpp"

#include <memory>
#include <unordered_map>

#include "cobit/rng.hpp"

namespace cobit {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::kNand: return "NAND";
    case GateKind::kXor: return "XOR";
    case GateKind::kNot: return "NOT";
    case GateKind::kAnd: return "AND";
    case GateKind::kOr: return "OR";
  }
  return "?";
}

std::vector<std::size_t> topological_order(const BoolCircuit& circuit) {
  if (circuit.inputs.size() > BoolCircuit::kMaxInputs) {
    throw CircuitError("too many inputs (" + std::to_string(circuit.inputs.size()) +
                       " > " + std::to_string(BoolCircuit::kMaxInputs) + ")");
  }
  constexpr std::size_t kInput = static_cast<std::size_t>(-1);
  std::unordered_map<std::string, std::size_t> producer;
  for (const auto& name : circuit.inputs) {
    if (!producer.emplace(name, kInput).second) {
      throw CircuitError("input '" + name + "' declared twice");
    }
  }
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const Gate& gate = circuit.gates[g];
    if (!producer.emplace(gate.out, g).second) {
      throw CircuitError("wire '" + gate.out + "' defined twice", gate.line);
    }
  }
  auto require_defined = [&](const std::string& name, int line) {
    if (!producer.contains(name)) throw CircuitError("undefined wire '" + name + "'", line);
  };
  for (const Gate& gate : circuit.gates) {
    require_defined(gate.lhs, gate.line);
    if (gate.kind == GateKind::kNot) {
      if (!gate.rhs.empty()) throw CircuitError("NOT takes one argument", gate.line);
    } else {
      if (gate.rhs.empty()) {
        throw CircuitError(std::string(to_string(gate.kind)) + " takes two arguments", gate.line);
      }
      require_defined(gate.rhs, gate.line);
    }
  }
  for (const auto& out : circuit.outputs) require_defined(out, 0);

  // Iterative DFS; 0 = unvisited, 1 = on stack, 2 = done.
  std::vector<int> mark(circuit.gates.size(), 0);
  std::vector<std::size_t> order;
  order.reserve(circuit.gates.size());
  for (std::size_t root = 0; root < circuit.gates.size(); ++root) {
    if (mark[root] != 0) continue;
    std::vector<std::pair<std::size_t, int>> stack{{root, 0}};
    mark[root] = 1;
    while (!stack.empty()) {
      auto& [g, next_arg] = stack.back();
      const Gate& gate = circuit.gates[g];
      const int n_args = gate.kind == GateKind::kNot ? 1 : 2;
      if (next_arg == n_args) {
        mark[g] = 2;
        order.push_back(g);
        stack.pop_back();
        continue;
      }
      const std::string& arg = next_arg == 0 ? gate.lhs : gate.rhs;
      ++next_arg;
      const std::size_t dep = producer.at(arg);
      if (dep == kInput || mark[dep] == 2) continue;
      if (mark[dep] == 1) throw CircuitError("cycle through wire '" + arg + "'", gate.line);
      mark[dep] = 1;
      stack.emplace_back(dep, 0);
    }
  }
  return order;
}

Bits reference_evaluate(const BoolCircuit& circuit, const Bits& inputs) {
  if (inputs.size() != circuit.inputs.size()) {
    throw CircuitError("expected " + std::to_string(circuit.inputs.size()) + " input bits, got " +
                       std::to_string(inputs.size()));
  }
  const auto order = topological_order(circuit);
  std::unordered_map<std::string, bool> value;
  for (std::size_t i = 0; i < inputs.size(); ++i) value[circuit.inputs[i]] = inputs[i] != 0;
  for (std::size_t g : order) {
    const Gate& gate = circuit.gates[g];
    const bool x = value.at(gate.lhs);
    const bool y = gate.kind == GateKind::kNot ? false : value.at(gate.rhs);
    bool v = false;
    switch (gate.kind) {
      case GateKind::kNand: v = !(x && y); break;
      case GateKind::kXor: v = x != y; break;
      case GateKind::kNot: v = !x; break;
      case GateKind::kAnd: v = x && y; break;
      case GateKind::kOr: v = x || y; break;
    }
    value[gate.out] = v;
  }
  Bits out;
  out.reserve(circuit.outputs.size());
  for (const auto& name : circuit.outputs) out.push_back(value.at(name) ? 1 : 0);
  return out;
}

std::size_t DelegationPlan::delegated_rounds() const {
  std::size_t n = 0;
  for (const auto& step : steps) n += std::holds_alternative<DelegatedNand>(step) ? 1 : 0;
  return n;
}

std::size_t DelegationPlan::local_xors() const { return steps.size() - delegated_rounds(); }

DelegationPlan lower(const BoolCircuit& circuit, LoweringOptions options) {
  const auto order = topological_order(circuit);
  DelegationPlan plan;
  plan.n_inputs = circuit.inputs.size();
  plan.n_wires = plan.n_inputs;
  if (options.local_not) plan.const_one = plan.n_wires++;

  std::unordered_map<std::string, std::size_t> wire;
  for (std::size_t i = 0; i < circuit.inputs.size(); ++i) wire[circuit.inputs[i]] = i;

  auto nand_step = [&](std::size_t x, std::size_t y) {
    const std::size_t out = plan.n_wires++;
    plan.steps.emplace_back(DelegatedNand{x, y, out});
    return out;
  };
  auto xor_step = [&](std::size_t x, std::size_t y) {
    const std::size_t out = plan.n_wires++;
    plan.steps.emplace_back(LocalXor{x, y, out});
    return out;
  };
  auto not_step = [&](std::size_t x) {
    return plan.const_one ? xor_step(x, *plan.const_one) : nand_step(x, x);
  };

  for (std::size_t g : order) {
    const Gate& gate = circuit.gates[g];
    const std::size_t x = wire.at(gate.lhs);
    const std::size_t y = gate.kind == GateKind::kNot ? x : wire.at(gate.rhs);
    std::size_t out = 0;
    switch (gate.kind) {
      case GateKind::kNand: out = nand_step(x, y); break;
      case GateKind::kXor: out = xor_step(x, y); break;
      case GateKind::kNot: out = not_step(x); break;
      case GateKind::kAnd: out = not_step(nand_step(x, y)); break;
      case GateKind::kOr: {
        const std::size_t nx = not_step(x);
        const std::size_t ny = not_step(y);
        out = nand_step(nx, ny);
        break;
      }
    }
    wire[gate.out] = out;
  }
  for (const auto& name : circuit.outputs) plan.outputs.push_back(wire.at(name));
  return plan;
}

std::size_t expected_round_count(const BoolCircuit& circuit) {
  std::size_t n = 0;
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::kNand: n += 1; break;
      case GateKind::kNot: n += 1; break;
      case GateKind::kAnd: n += 2; break;
      case GateKind::kOr: n += 3; break;
      case GateKind::kXor: break;
    }
  }
  return n;
}

NandOracle in_process_oracle(RoundConfig base) {
  auto counter = std::make_shared<std::uint64_t>(0);
  return [base, counter](bool a, bool b) {
    RoundConfig cfg = base;
    cfg.seed = derive_seed(base.seed, Stream::kSession, (*counter)++);
    return run_round(a, b, cfg);
  };
}

Bits evaluate_delegated(const DelegationPlan& plan, const Bits& inputs, const NandOracle& oracle,
                        EvalTrace* trace) {
  if (inputs.size() != plan.n_inputs) {
    throw CircuitError("expected " + std::to_string(plan.n_inputs) + " input bits, got " +
                       std::to_string(inputs.size()));
  }
  Bits wires(plan.n_wires, 0);
  for (std::size_t i = 0; i < inputs.size(); ++i) wires[i] = inputs[i] != 0 ? 1 : 0;
  if (plan.const_one) wires[*plan.const_one] = 1;

  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    if (const auto* x = std::get_if<LocalXor>(&plan.steps[k])) {
      wires[x->out] = wires[x->lhs] ^ wires[x->rhs];
      continue;
    }
    const auto& n = std::get<DelegatedNand>(plan.steps[k]);
    RoundResult rr = oracle(wires[n.lhs] != 0, wires[n.rhs] != 0);
    if (!rr.decoded) {
      throw EvaluationError("delegated round at step " + std::to_string(k) + " was inconclusive",
                            k);
    }
    wires[n.out] = *rr.decoded ? 1 : 0;
    if (trace) trace->rounds.push_back(std::move(rr.transcript));
  }
  if (trace) trace->wires = wires;
  Bits out;
  out.reserve(plan.outputs.size());
  for (std::size_t w : plan.outputs) out.push_back(wires[w]);
  return out;
}

}  // namespace cobit
