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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "cobit/config.hpp"

namespace cobitctl {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitProtocol = 3,
  kExitBlindness = 4,
  kExitMismatch = 5,
};

// Bad flags or flag combinations; reported like a config error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flags every subcommand accepts. Unset optionals leave the config file (or
// the built-in ideal defaults) untouched.
struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> copies;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

cobit::RunConfig resolve_config(const CommonFlags& flags);

struct RoundArgs {
  bool a = false;
  bool b = false;
};

struct CalibrateArgs {
  std::optional<double> target;
  std::optional<std::string> parameter;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> tolerance;
};

struct BlindnessArgs {
  bool no_pad = false;
  std::size_t probes = 50;
};

struct CircuitArgs {
  std::string netlist;
  std::string inputs;
  bool all_inputs = false;
  bool local_not = false;
};

struct ServeArgs {
  std::string listen = "127.0.0.1:0";
  std::optional<std::uint64_t> max_sessions;
};

struct ConnectArgs {
  std::string endpoint;
  std::uint64_t rounds = 1;
  std::optional<int> a;
  std::optional<int> b;
};

int cmd_round(const cobit::RunConfig& cfg, const RoundArgs& args);
int cmd_truth_table(const cobit::RunConfig& cfg);
int cmd_stability(const cobit::RunConfig& cfg);
int cmd_calibrate(const cobit::RunConfig& cfg, const CalibrateArgs& args);
int cmd_blindness(const cobit::RunConfig& cfg, const BlindnessArgs& args);
int cmd_circuit(const cobit::RunConfig& cfg, const CircuitArgs& args);
int cmd_serve(const cobit::RunConfig& cfg, const ServeArgs& args);
int cmd_connect(const cobit::RunConfig& cfg, const ConnectArgs& args);

}  // namespace cobitctl
