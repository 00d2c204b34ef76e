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

// Noise and source models: loss, plate jitter, fibre drift, detector
// efficiency, dark counts and photon sources. Every term is independently
// switchable and the default-constructed models are the noiseless ideal.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "cobit/state.hpp"

namespace cobit {

/// Fibre polarization drift: a rotation by eps(t) = offset + slope_per_min*t,
/// plus a per-round Gaussian of width sigma_round. The same eps is applied on
/// the forward and the return path of a round.
struct DriftSchedule {
  double offset = 0.0;
  double slope_per_min = 0.0;
  double sigma_round = 0.0;

  double mean_at(double elapsed_min) const { return offset + slope_per_min * elapsed_min; }
  double sample(double elapsed_min, Rng& rng) const;
  bool is_zero() const { return offset == 0.0 && slope_per_min == 0.0 && sigma_round == 0.0; }
};

struct NoiseModel {
  /// Probability that a photon is lost over the round trip.
  double loss_prob = 0.0;
  /// Per-plate (or per-gate in abstract mode) Gaussian angle error, radians.
  double plate_jitter_sigma = 0.0;
  DriftSchedule drift;
  double detector_efficiency = 1.0;
  /// Probability of one spurious click, uniformly 0 or 1, per detection window.
  double dark_count_prob = 0.0;
  /// Detector deadtime; caps registered clicks at window/deadtime. 0 disables.
  double deadtime_s = 0.0;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  bool is_ideal() const;
};

enum class SourceKind : std::uint8_t {
  /// Fixed number of copies per round; the abstract cobit source.
  kIdeal,
  /// One heralded photon per round; `rate_hz` is the herald rate.
  kHeralded,
  /// Attenuated beam; `rate_hz` is the detected count rate after the setup and
  /// each round integrates over `window_s`.
  kCoherent,
};

struct SourceModel {
  SourceKind kind = SourceKind::kIdeal;
  double rate_hz = 0.0;
  double window_s = 1e-4;

  static SourceModel ideal() { return {}; }
  static SourceModel heralded(double rate_hz) { return {SourceKind::kHeralded, rate_hz, 1e-4}; }
  static SourceModel coherent(double rate_hz, double window_s) {
    return {SourceKind::kCoherent, rate_hz, window_s};
  }

  void validate() const;
};

/// Heralded: Poisson(rate * window) heralds, one signal photon each.
/// Coherent: Poisson(rate * window) detected photons.
std::uint64_t sample_photon_count(const SourceModel& source, double window_s, Rng& rng);

/// One traversal of the channel at `elapsed_min`: lost with probability
/// loss_prob, otherwise rotated by a freshly sampled drift angle.
std::optional<CobitState> apply_noise(const CobitState& state, const NoiseModel& model,
                                      double elapsed_min, Rng& rng);

/// Photons a coherent round must launch so that, after loss and detector
/// efficiency, the detected count is Poisson(rate * window) (Poisson thinning).
double coherent_launch_mean(const SourceModel& source, const NoiseModel& model);

struct ClickCounts {
  std::size_t zeros = 0;
  std::size_t ones = 0;

  std::size_t total() const { return zeros + ones; }
};

/// Detector model for one window: each arriving state is registered with
/// probability detector_efficiency and measured in the computational basis,
/// a dark click is added with probability dark_count_prob, and the total is
/// capped by the deadtime limit.
ClickCounts detect(std::span<const CobitState> arriving, const NoiseModel& model,
                   double window_s, Rng& rng);

}  // namespace cobit
