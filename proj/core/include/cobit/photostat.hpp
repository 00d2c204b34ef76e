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

// Monte Carlo estimation of delegated-NAND success rates, calibration of a
// free noise parameter against a target rate, and long-run stability series.
//
// Trial i always runs with seed derive_seed(config.seed, Stream::kTrial, i),
// so aggregates are identical however the trials are spread over workers.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cobit/protocol.hpp"

namespace cobit {

/// p_hat with a Poissonian error: sqrt(max(k, 1)) / n where k is the smaller
/// of the success and failure counts.
struct EstimateWithError {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

EstimateWithError poisson_estimate(std::uint64_t successes, std::uint64_t n);

struct SuccessEstimate {
  /// Over conclusive rounds only.
  EstimateWithError success;
  std::uint64_t trials = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t correct = 0;
  /// Fraction of trials with no registered click, with its Poissonian error.
  EstimateWithError inconclusive;
};

/// Runs n_trials rounds on fixed inputs (pad drawn per round unless forced).
SuccessEstimate estimate_success(bool a, bool b, const RoundConfig& config,
                                 std::uint64_t n_trials);

/// Runs n_trials rounds with (a, b) drawn uniformly per round.
SuccessEstimate estimate_success_uniform(const RoundConfig& config, std::uint64_t n_trials);

enum class FreeParameter : std::uint8_t { kPlateJitter, kDriftSigma, kDriftSlope };

/// Writes `value` into the field of `config` selected by `param`.
void set_parameter(RoundConfig& config, FreeParameter param, double value);

struct SearchBounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct Calibration {
  double value = 0.0;
  SuccessEstimate achieved;
  int evaluations = 0;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisects `param` over `bounds` until the uniform-input success estimate is
/// within `tolerance` of `target`. Each evaluation reuses config.seed, so the
/// map parameter -> estimate is evaluated on common random numbers. Throws
/// CalibrationError when the target is outside [success(hi), success(lo)].
Calibration calibrate_to_target(double target, FreeParameter param, SearchBounds bounds,
                                const RoundConfig& base, std::uint64_t n_trials,
                                double tolerance = 1e-3);

struct StabilityPoint {
  double elapsed_min = 0.0;
  SuccessEstimate estimate;
};

/// Evaluates uniform-input success at n_points evenly spaced times over
/// [0, duration_min]; each point gets its own seed.
std::vector<StabilityPoint> stability_series(const RoundConfig& config,
                                             double duration_min = 210.0, int n_points = 6,
                                             std::uint64_t trials_per_point = 100000);

}  // namespace cobit
