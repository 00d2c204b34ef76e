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

#include "cobit/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cobit {
namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string("NoiseModel: ") + name + " must lie in [0, 1]");
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
  }
}

bool bernoulli(double p, Rng& rng) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace

double DriftSchedule::sample(double elapsed_min, Rng& rng) const {
  double eps = mean_at(elapsed_min);
  if (sigma_round > 0.0) eps += std::normal_distribution<double>(0.0, sigma_round)(rng);
  return eps;
}

void NoiseModel::validate() const {
  require_probability(loss_prob, "loss_prob");
  require_probability(detector_efficiency, "detector_efficiency");
  require_probability(dark_count_prob, "dark_count_prob");
  require_non_negative(plate_jitter_sigma, "plate_jitter_sigma");
  require_non_negative(drift.sigma_round, "drift.sigma_round");
  require_non_negative(deadtime_s, "deadtime_s");
  if (!std::isfinite(drift.offset) || !std::isfinite(drift.slope_per_min)) {
    throw std::invalid_argument("DriftSchedule: offset and slope must be finite");
  }
}

bool NoiseModel::is_ideal() const {
  return loss_prob == 0.0 && plate_jitter_sigma == 0.0 && drift.is_zero() &&
         detector_efficiency == 1.0 && dark_count_prob == 0.0 && deadtime_s == 0.0;
}

void SourceModel::validate() const {
  require_non_negative(rate_hz, "SourceModel: rate_hz");
  if (!(window_s > 0.0) || !std::isfinite(window_s)) {
    throw std::invalid_argument("SourceModel: window_s must be > 0");
  }
}

std::uint64_t sample_photon_count(const SourceModel& source, double window_s, Rng& rng) {
  if (!(window_s > 0.0)) throw std::invalid_argument("sample_photon_count: window must be > 0");
  if (source.kind == SourceKind::kIdeal) {
    throw std::invalid_argument("sample_photon_count: the ideal source has no count statistics");
  }
  const double mean = source.rate_hz * window_s;
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

std::optional<CobitState> apply_noise(const CobitState& state, const NoiseModel& model,
                                      double elapsed_min, Rng& rng) {
  if (bernoulli(model.loss_prob, rng)) return std::nullopt;
  if (model.drift.is_zero()) return state;
  return apply(Operator2::rotation(model.drift.sample(elapsed_min, rng)), state);
}

double coherent_launch_mean(const SourceModel& source, const NoiseModel& model) {
  const double detected = source.rate_hz * source.window_s;
  const double transmission = (1.0 - model.loss_prob) * model.detector_efficiency;
  return transmission > 0.0 ? detected / transmission : detected;
}

ClickCounts detect(std::span<const CobitState> arriving, const NoiseModel& model,
                   double window_s, Rng& rng) {
  std::vector<int> clicks;
  clicks.reserve(arriving.size() + 1);
  for (const CobitState& s : arriving) {
    if (!bernoulli(model.detector_efficiency, rng)) continue;
    clicks.push_back(measure_z(s, rng));
  }
  if (bernoulli(model.dark_count_prob, rng)) {
    clicks.push_back(std::bernoulli_distribution(0.5)(rng) ? 1 : 0);
  }
  if (model.deadtime_s > 0.0) {
    const auto cap = static_cast<std::size_t>(std::floor(window_s / model.deadtime_s));
    if (clicks.size() > cap) {
      std::shuffle(clicks.begin(), clicks.end(), rng);
      clicks.resize(cap);
    }
  }
  ClickCounts counts;
  for (int c : clicks) (c == 1 ? counts.ones : counts.zeros) += 1;
  return counts;
}

}  // namespace cobit
