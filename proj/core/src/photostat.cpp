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

#include "cobit/photostat.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cobit/rng.hpp"

namespace cobit {
namespace {

struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t correct = 0;
};

// Inputs for trial i of a uniform run: two independent fair bits.
std::pair<bool, bool> uniform_inputs(std::uint64_t root, std::uint64_t i) {
  const std::uint64_t w = mix64(derive_seed(root, Stream::kInputs, i));
  return {(w & 1U) != 0, (w & 2U) != 0};
}

template <typename InputsForTrial>
SuccessEstimate run_trials(const RoundConfig& config, std::uint64_t n_trials,
                           InputsForTrial inputs_for) {
  if (n_trials == 0) throw std::invalid_argument("n_trials must be >= 1");
  config.validate();

  constexpr std::uint64_t kMinPerWorker = 4096;
  const std::uint64_t hw = std::max(1U, std::thread::hardware_concurrency());
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(n_trials / kMinPerWorker, 1, hw);

  std::vector<Tally> tallies(workers);
  auto work = [&](std::uint64_t w) {
    const std::uint64_t begin = n_trials * w / workers;
    const std::uint64_t end = n_trials * (w + 1) / workers;
    RoundConfig cfg = config;
    cfg.record_states = false;
    Tally& tally = tallies[w];
    for (std::uint64_t i = begin; i < end; ++i) {
      cfg.seed = derive_seed(config.seed, Stream::kTrial, i);
      const auto [a, b] = inputs_for(i);
      const RoundResult rr = run_round(a, b, cfg);
      ++tally.trials;
      if (rr.decoded) {
        ++tally.conclusive;
        if (*rr.decoded == nand(a, b)) ++tally.correct;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  Tally total;
  for (const Tally& t : tallies) {
    total.trials += t.trials;
    total.conclusive += t.conclusive;
    total.correct += t.correct;
  }
  SuccessEstimate est;
  est.trials = total.trials;
  est.conclusive = total.conclusive;
  est.correct = total.correct;
  est.success = poisson_estimate(total.correct, total.conclusive);
  est.inconclusive = poisson_estimate(total.trials - total.conclusive, total.trials);
  return est;
}

}  // namespace

EstimateWithError poisson_estimate(std::uint64_t successes, std::uint64_t n) {
  EstimateWithError e;
  e.n = n;
  if (n == 0) return e;
  const double dn = static_cast<double>(n);
  const std::uint64_t minority = std::min(successes, n - successes);
  e.p_hat = static_cast<double>(successes) / dn;
  e.std_error = std::sqrt(static_cast<double>(std::max<std::uint64_t>(minority, 1))) / dn;
  return e;
}

SuccessEstimate estimate_success(bool a, bool b, const RoundConfig& config,
                                 std::uint64_t n_trials) {
  return run_trials(config, n_trials, [a, b](std::uint64_t) { return std::pair{a, b}; });
}

SuccessEstimate estimate_success_uniform(const RoundConfig& config, std::uint64_t n_trials) {
  const std::uint64_t root = config.seed;
  return run_trials(config, n_trials,
                    [root](std::uint64_t i) { return uniform_inputs(root, i); });
}

void set_parameter(RoundConfig& config, FreeParameter param, double value) {
  switch (param) {
    case FreeParameter::kPlateJitter:
      config.noise.plate_jitter_sigma = value;
      break;
    case FreeParameter::kDriftSigma:
      config.noise.drift.sigma_round = value;
      break;
    case FreeParameter::kDriftSlope:
      config.noise.drift.slope_per_min = value;
      break;
  }
}

Calibration calibrate_to_target(double target, FreeParameter param, SearchBounds bounds,
                                const RoundConfig& base, std::uint64_t n_trials,
                                double tolerance) {
  if (!(target > 0.5 && target <= 1.0)) {
    throw CalibrationError("calibrate_to_target: target must lie in (0.5, 1]");
  }
  if (!(bounds.lo < bounds.hi)) throw CalibrationError("calibrate_to_target: empty bounds");

  Calibration cal;
  auto evaluate = [&](double value) {
    RoundConfig cfg = base;
    set_parameter(cfg, param, value);
    ++cal.evaluations;
    return estimate_success_uniform(cfg, n_trials);
  };
  auto consider = [&](double value, const SuccessEstimate& est) {
    const double err = std::abs(est.success.p_hat - target);
    if (cal.evaluations == 1 || err < std::abs(cal.achieved.success.p_hat - target)) {
      cal.value = value;
      cal.achieved = est;
    }
    return err;
  };

  const SuccessEstimate at_lo = evaluate(bounds.lo);
  if (consider(bounds.lo, at_lo) <= tolerance) return cal;
  if (at_lo.success.p_hat < target) {
    throw CalibrationError("target success is above the best achievable in bounds");
  }
  const SuccessEstimate at_hi = evaluate(bounds.hi);
  if (consider(bounds.hi, at_hi) <= tolerance) return cal;
  if (at_hi.success.p_hat > target) {
    throw CalibrationError("target success is below the worst achievable in bounds");
  }

  double lo = bounds.lo;
  double hi = bounds.hi;
  for (int iter = 0; iter < 48; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const SuccessEstimate est = evaluate(mid);
    const double err = consider(mid, est);
    if (err <= 0.25 * tolerance) break;
    (est.success.p_hat > target ? lo : hi) = mid;
  }
  return cal;
}

std::vector<StabilityPoint> stability_series(const RoundConfig& config, double duration_min,
                                             int n_points, std::uint64_t trials_per_point) {
  if (n_points < 2) throw std::invalid_argument("stability_series: need at least two points");
  if (!(duration_min > 0.0)) throw std::invalid_argument("stability_series: bad duration");
  std::vector<StabilityPoint> series;
  series.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    RoundConfig cfg = config;
    cfg.elapsed_min = duration_min * k / (n_points - 1);
    cfg.seed = derive_seed(config.seed, Stream::kTrial, 0xfeed0000ULL + k);
    series.push_back({cfg.elapsed_min, estimate_success_uniform(cfg, trials_per_point)});
  }
  return series;
}

}  // namespace cobit
