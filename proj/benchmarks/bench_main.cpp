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

#include <benchmark/benchmark.h>

#include <random>

#include "cobit/photostat.hpp"
#include "cobit/protocol.hpp"
#include "cobit/security.hpp"
#include "cobit/wire.hpp"

namespace {

using namespace cobit;

void BM_RoundPlates(benchmark::State& state) {
  RoundConfig cfg;
  cfg.n_copies = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    cfg.seed = i++;
    benchmark::DoNotOptimize(run_round(i & 1, i & 2, cfg));
  }
}
BENCHMARK(BM_RoundPlates)->Arg(1)->Arg(3)->Arg(100);

void BM_RoundCoherentNoisy(benchmark::State& state) {
  RoundConfig cfg;
  cfg.source = SourceModel::coherent(30'000, 1e-4);
  cfg.noise.detector_efficiency = 0.2;
  cfg.noise.plate_jitter_sigma = 0.046;
  std::uint64_t i = 0;
  for (auto _ : state) {
    cfg.seed = i++;
    benchmark::DoNotOptimize(run_round(i & 1, i & 2, cfg));
  }
}
BENCHMARK(BM_RoundCoherentNoisy);

void BM_EstimateUniform(benchmark::State& state) {
  RoundConfig cfg;
  cfg.source = SourceModel::heralded(300);
  cfg.noise.detector_efficiency = 0.2;
  cfg.noise.plate_jitter_sigma = 0.028;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_success_uniform(cfg, 10'000));
  }
  state.SetItemsProcessed(state.iterations() * 10'000);
}
BENCHMARK(BM_EstimateUniform)->Unit(benchmark::kMillisecond);

wire::Message transformed(std::size_t n) {
  wire::Transformed t;
  for (std::size_t k = 0; k < n; ++k) {
    t.states.push_back(wire::transport_state(CobitState::normalized(0.6, Complex(0.0, 0.8))));
  }
  return t;
}

void BM_EncodeFrame(benchmark::State& state) {
  const wire::Message msg = transformed(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wire::encode_frame(msg));
}
BENCHMARK(BM_EncodeFrame)->Arg(1)->Arg(64)->Arg(4096);

void BM_DecodeFrame(benchmark::State& state) {
  const auto bytes = wire::encode_frame(transformed(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(wire::decode_frame(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeFrame)->Arg(1)->Arg(64)->Arg(4096);

void BM_BlindnessAudit(benchmark::State& state) {
  AuditOptions opt;
  opt.copies = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(audit_blindness(opt));
}
BENCHMARK(BM_BlindnessAudit)->Arg(1)->Arg(6)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
