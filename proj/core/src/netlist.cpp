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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cobit/circuit.hpp"

namespace cobit {
namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_space();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw CircuitError(what + " at column " + std::to_string(pos_ + 1), line_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

GateKind gate_kind(const std::string& word, const LineParser& p) {
  std::string upper = word;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "NAND") return GateKind::kNand;
  if (upper == "XOR") return GateKind::kXor;
  if (upper == "NOT") return GateKind::kNot;
  if (upper == "AND") return GateKind::kAnd;
  if (upper == "OR") return GateKind::kOr;
  p.fail("unknown gate '" + word + "'");
}

}  // namespace

BoolCircuit parse_netlist(std::string_view text) {
  BoolCircuit circuit;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    LineParser p(line, line_no);
    if (p.at_end()) continue;

    const std::string head = p.ident();
    if (head == "INPUT" || head == "OUTPUT") {
      auto& names = head == "INPUT" ? circuit.inputs : circuit.outputs;
      names.push_back(p.ident());
      while (!p.at_end()) {
        p.accept(',');
        names.push_back(p.ident());
      }
      continue;
    }

    Gate gate;
    gate.out = head;
    gate.line = line_no;
    p.expect('=');
    gate.kind = gate_kind(p.ident(), p);
    p.expect('(');
    gate.lhs = p.ident();
    if (p.accept(',')) gate.rhs = p.ident();
    p.expect(')');
    if (!p.at_end()) p.fail("unexpected trailing text");
    if (gate.kind == GateKind::kNot && !gate.rhs.empty()) {
      throw CircuitError("NOT takes one argument", line_no);
    }
    if (gate.kind != GateKind::kNot && gate.rhs.empty()) {
      throw CircuitError(std::string(to_string(gate.kind)) + " takes two arguments", line_no);
    }
    circuit.gates.push_back(std::move(gate));
  }
  topological_order(circuit);
  return circuit;
}

BoolCircuit load_netlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CircuitError("cannot open netlist '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_netlist(buf.str());
}

}  // namespace cobit
