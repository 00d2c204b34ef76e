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

// JSON run configuration shared by the command-line tool and the tests.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cobit/photostat.hpp"
#include "cobit/protocol.hpp"

namespace cobit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CalibrationSpec {
  double target = 0.0;
  FreeParameter parameter = FreeParameter::kPlateJitter;
  SearchBounds bounds{0.0, 0.5};
  double tolerance = 1e-3;
  /// Elapsed time at which the target applies (stability runs).
  double at_elapsed_min = 0.0;
};

struct RunConfig {
  Mode mode = Mode::kPlates;
  std::size_t copies = 1;
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;
  SourceModel source;
  NoiseModel noise;
  double elapsed_min = 0.0;
  bool local_not = false;
  std::chrono::milliseconds timeout{5000};
  std::chrono::milliseconds delay{0};
  double duration_min = 210.0;
  int stability_points = 6;
  std::optional<CalibrationSpec> calibration;
  std::string output;
  std::string format = "csv";

  /// Throws ConfigError when no seed is set anywhere.
  std::uint64_t require_seed() const;
  RoundConfig round_config() const;
};

/// Unknown keys and out-of-range values are errors; the message names the
/// offending key path.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

FreeParameter parse_free_parameter(std::string_view text);
std::string_view to_string(FreeParameter param);
SourceKind parse_source_kind(std::string_view text);
std::string_view to_string(SourceKind kind);

}  // namespace cobit
