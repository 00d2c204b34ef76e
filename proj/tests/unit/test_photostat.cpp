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

#include <gtest/gtest.h>

#include <cmath>

#include "cobit/noise.hpp"
#include "cobit/photostat.hpp"
#include "cobit/rng.hpp"

namespace cobit {
namespace {

double sigma_binomial(double p, double n) { return std::sqrt(p * (1 - p) / n); }

TEST(SamplePhotonCount, HeraldedTenSeconds) {
  Rng rng(1);
  const SourceModel src = SourceModel::heralded(300);
  for (int run = 0; run < 100; ++run) {
    const double k = static_cast<double>(sample_photon_count(src, 10.0, rng));
    EXPECT_LE(std::abs(k - 3000.0), 4 * std::sqrt(3000.0));
  }
}

TEST(SamplePhotonCount, CoherentZeroMean) {
  Rng rng(2);
  EXPECT_EQ(sample_photon_count(SourceModel::coherent(0, 1e-4), 1e-4, rng), 0U);
}

TEST(SamplePhotonCount, CoherentMeanThree) {
  Rng rng(3);
  const SourceModel src = SourceModel::coherent(30000, 1e-4);
  constexpr int n = 100'000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(sample_photon_count(src, 1e-4, rng));
  EXPECT_LE(std::abs(sum / n - 3.0), 3 * std::sqrt(3.0 / n));
}

TEST(SamplePhotonCount, RejectsBadInputs) {
  Rng rng(4);
  EXPECT_THROW(sample_photon_count(SourceModel::heralded(300), 0.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_photon_count(SourceModel::ideal(), 1.0, rng), std::invalid_argument);
}

TEST(ApplyNoise, TotalLossAndIdentity) {
  Rng rng(5);
  NoiseModel lossy;
  lossy.loss_prob = 1.0;
  const CobitState s = CobitState::normalized(0.6, {0, 0.8});
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(apply_noise(s, lossy, 0.0, rng).has_value());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(apply_noise(s, NoiseModel{}, 3.0, rng), s);
}

TEST(ApplyNoise, DriftRotatesByScheduledAngle) {
  Rng rng(6);
  NoiseModel m;
  m.drift.offset = 0.01;
  m.drift.slope_per_min = 0.001;
  const auto out = apply_noise(basis_state(0), m, 10.0, rng);
  ASSERT_TRUE(out);
  EXPECT_NEAR(out->prob1(), std::pow(std::sin(0.02), 2), 1e-15);
}

TEST(NoiseModel, Validation) {
  NoiseModel m;
  EXPECT_NO_THROW(m.validate());
  EXPECT_TRUE(m.is_ideal());
  m.loss_prob = 1.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = {};
  m.plate_jitter_sigma = -1;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = {};
  m.detector_efficiency = std::nan("");
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(Detect, EfficiencyDarkCountsDeadtime) {
  Rng rng(7);
  NoiseModel m;
  m.detector_efficiency = 0.2;
  std::vector<CobitState> copies(1000, basis_state(1));
  const ClickCounts c = detect(copies, m, 1e-4, rng);
  EXPECT_EQ(c.zeros, 0U);
  EXPECT_LE(std::abs(static_cast<double>(c.ones) - 200.0), 4 * std::sqrt(160.0));

  m = {};
  m.deadtime_s = 1e-5;
  EXPECT_EQ(detect(copies, m, 1e-4, rng).total(), 10U);

  m = {};
  m.dark_count_prob = 1.0;
  const ClickCounts dark = detect({}, m, 1e-4, rng);
  EXPECT_EQ(dark.total(), 1U);
}

TEST(PoissonEstimate, Formula) {
  const auto e = poisson_estimate(990, 1000);
  EXPECT_DOUBLE_EQ(e.p_hat, 0.99);
  EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(10.0) / 1000);
  EXPECT_DOUBLE_EQ(poisson_estimate(1000, 1000).std_error, 1.0 / 1000);
  EXPECT_EQ(poisson_estimate(0, 0).n, 0U);
}

TEST(EstimateSuccess, NoiselessIsExact) {
  RoundConfig cfg;
  cfg.seed = 1;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const SuccessEstimate e = estimate_success(a, b, cfg, 10'000);
      EXPECT_EQ(e.success.p_hat, 1.0);
      EXPECT_EQ(e.conclusive, 10'000U);
      EXPECT_EQ(e.inconclusive.p_hat, 0.0);
    }
}

TEST(EstimateSuccess, HalfLossSinglePhoton) {
  RoundConfig cfg;
  cfg.seed = 2;
  cfg.source = SourceModel::heralded(300);
  cfg.noise.loss_prob = 0.5;
  constexpr std::uint64_t n = 20'000;
  const SuccessEstimate e = estimate_success(true, false, cfg, n);
  EXPECT_LE(std::abs(e.inconclusive.p_hat - 0.5), 3 * sigma_binomial(0.5, n));
  EXPECT_EQ(e.success.p_hat, 1.0);
}

TEST(EstimateSuccess, SeedDeterministicAcrossRuns) {
  RoundConfig cfg;
  cfg.seed = 3;
  cfg.noise.plate_jitter_sigma = 0.2;
  const auto x = estimate_success_uniform(cfg, 9000);
  const auto y = estimate_success_uniform(cfg, 9000);
  EXPECT_EQ(x.correct, y.correct);
  EXPECT_EQ(x.conclusive, y.conclusive);
}

TEST(EstimateSuccess, AggregateIndependentOfWorkerSplit) {
  // Trials are seeded by index, so a run of 2n trials equals the sum of its
  // halves computed by separate single-worker runs whose seeds line up.
  RoundConfig cfg;
  cfg.seed = 4;
  cfg.noise.plate_jitter_sigma = 0.25;
  const auto whole = estimate_success(true, true, cfg, 12'288);
  std::uint64_t correct = 0;
  for (std::uint64_t i = 0; i < 12'288; ++i) {
    RoundConfig one = cfg;
    one.seed = derive_seed(cfg.seed, Stream::kTrial, i);
    correct += run_round(true, true, one).decoded == Outcome{false} ? 1 : 0;
  }
  EXPECT_EQ(whole.correct, correct);
}

TEST(Calibrate, TargetOneGivesZero) {
  RoundConfig cfg;
  cfg.seed = 5;
  const Calibration c =
      calibrate_to_target(1.0, FreeParameter::kPlateJitter, {0.0, 0.5}, cfg, 5000);
  EXPECT_EQ(c.value, 0.0);
  EXPECT_EQ(c.achieved.success.p_hat, 1.0);
}

TEST(Calibrate, HitsTargetAndIsMonotone) {
  RoundConfig cfg;
  cfg.seed = 6;
  cfg.source = SourceModel::heralded(300);
  cfg.noise.detector_efficiency = 0.2;
  constexpr std::uint64_t n = 40'000;
  const Calibration c =
      calibrate_to_target(0.988, FreeParameter::kPlateJitter, {0.0, 0.5}, cfg, n, 2e-3);
  EXPECT_GT(c.value, 0.0);
  EXPECT_GE(c.achieved.success.p_hat, 0.983);
  EXPECT_LE(c.achieved.success.p_hat, 0.993);

  RoundConfig doubled = cfg;
  doubled.noise.plate_jitter_sigma = 2 * c.value;
  doubled.seed = 60;
  const auto worse = estimate_success_uniform(doubled, n);
  const double sep = c.achieved.success.p_hat - worse.success.p_hat;
  EXPECT_GT(sep, 3 * std::hypot(c.achieved.success.std_error, worse.success.std_error));
}

TEST(Calibrate, Errors) {
  RoundConfig cfg;
  EXPECT_THROW(calibrate_to_target(0.4, FreeParameter::kPlateJitter, {0, 1}, cfg, 100),
               CalibrationError);
  EXPECT_THROW(calibrate_to_target(0.9, FreeParameter::kPlateJitter, {1, 0}, cfg, 100),
               CalibrationError);
  // Out of reach: even the largest jitter in a tiny range keeps success near 1.
  EXPECT_THROW(calibrate_to_target(0.7, FreeParameter::kPlateJitter, {0, 1e-3}, cfg, 2000),
               CalibrationError);
}

TEST(Stability, ZeroDriftIsFlat) {
  RoundConfig cfg;
  cfg.seed = 7;
  cfg.noise.plate_jitter_sigma = 0.1;
  const auto series = stability_series(cfg, 210, 6, 20'000);
  ASSERT_EQ(series.size(), 6U);
  for (std::size_t i = 0; i < series.size(); ++i) {
    EXPECT_DOUBLE_EQ(series[i].elapsed_min, 42.0 * static_cast<double>(i));
    for (std::size_t j = 0; j < i; ++j) {
      const auto& x = series[i].estimate.success;
      const auto& y = series[j].estimate.success;
      EXPECT_LE(std::abs(x.p_hat - y.p_hat), 3 * std::hypot(x.std_error, y.std_error) + 1e-4);
    }
  }
}

TEST(Stability, PositiveSlopeDeclines) {
  RoundConfig cfg;
  cfg.seed = 8;
  cfg.noise.drift.slope_per_min = 0.0005;
  const auto series = stability_series(cfg, 210, 6, 100'000);
  EXPECT_GE(series.front().estimate.success.p_hat, series.back().estimate.success.p_hat);
  EXPECT_EQ(series.front().estimate.success.p_hat, 1.0);
}

// Properties.

TEST(PhotostatProperties, PadIndependentSuccess) {
  RoundConfig cfg;
  cfg.seed = 9;
  cfg.noise.plate_jitter_sigma = 0.15;
  constexpr std::uint64_t n = 20'000;
  cfg.forced_pad = false;
  const auto r0 = estimate_success_uniform(cfg, n);
  cfg.forced_pad = true;
  cfg.seed = 10;
  const auto r1 = estimate_success_uniform(cfg, n);
  EXPECT_LE(std::abs(r0.success.p_hat - r1.success.p_hat),
            3 * std::hypot(r0.success.std_error, r1.success.std_error));
}

TEST(PhotostatProperties, LossNeverBiases) {
  for (double p : {0.1, 0.5, 0.9}) {
    RoundConfig cfg;
    cfg.seed = 11;
    cfg.source = SourceModel::heralded(300);
    cfg.noise.loss_prob = p;
    const auto e = estimate_success_uniform(cfg, 10'000);
    EXPECT_EQ(e.correct, e.conclusive);
  }
}

TEST(PhotostatProperties, StdErrorShrinksAsRootN) {
  RoundConfig cfg;
  cfg.seed = 12;
  cfg.noise.plate_jitter_sigma = 0.2;
  const auto x = estimate_success_uniform(cfg, 40'000);
  const auto y = estimate_success_uniform(cfg, 80'000);
  EXPECT_NEAR(x.success.std_error / y.success.std_error, std::sqrt(2.0), 0.05 * std::sqrt(2.0));
}

TEST(PhotostatProperties, DarkCountErrorFloor) {
  for (double d : {0.01, 0.1, 0.3}) {
    RoundConfig cfg;
    cfg.seed = 13;
    cfg.noise.dark_count_prob = d;
    const auto e = estimate_success_uniform(cfg, 20'000);
    EXPECT_GE(e.success.p_hat, 1 - d);
  }
  // Majority over copies suppresses a single dark click entirely.
  RoundConfig cfg;
  cfg.seed = 14;
  cfg.n_copies = 5;
  cfg.noise.dark_count_prob = 0.5;
  EXPECT_EQ(estimate_success_uniform(cfg, 5000).success.p_hat, 1.0);
}

}  // namespace
}  // namespace cobit
