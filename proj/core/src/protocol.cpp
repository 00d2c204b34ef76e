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

#include "cobit/protocol.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cobit/rng.hpp"

namespace cobit {
namespace {

std::int64_t now_ticks() {
  return std::chrono::steady_clock::now().time_since_epoch().count();
}

}  // namespace

std::string_view to_string(Mode mode) {
  return mode == Mode::kAbstract ? "abstract" : "plates";
}

Mode parse_mode(std::string_view text) {
  if (text == "abstract") return Mode::kAbstract;
  if (text == "plates") return Mode::kPlates;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

void TransitBatch::transform(const Operator2& op) {
  for (auto& s : states_) s = apply(op, s);
}

TransitBatch Channel::launch(std::vector<CobitState> states) {
  return TransitBatch(std::move(states));
}

std::span<const CobitState> Channel::view(const TransitBatch& batch) { return batch.states_; }

void Channel::propagate(TransitBatch& batch, double drift_angle, double loss_prob, Rng& rng) {
  if (drift_angle != 0.0) batch.transform(Operator2::rotation(drift_angle));
  if (loss_prob <= 0.0) return;
  std::bernoulli_distribution lost(std::min(loss_prob, 1.0));
  std::erase_if(batch.states_, [&](const CobitState&) { return lost(rng); });
}

ClientCapability::ClientCapability(std::uint64_t seed, double jitter_sigma,
                                   std::optional<bool> forced_pad)
    : pad_rng_(derive_seed(seed, Stream::kClient, 0)),
      jitter_rng_(derive_seed(seed, Stream::kClient, 1)),
      jitter_sigma_(jitter_sigma),
      forced_pad_(forced_pad) {
  if (!(jitter_sigma >= 0.0)) throw std::invalid_argument("jitter sigma must be >= 0");
}

bool ClientCapability::fresh_random_bit() {
  ++pads_drawn_;
  const bool drawn = std::bernoulli_distribution(0.5)(pad_rng_);
  return forced_pad_.value_or(drawn);
}

double ClientCapability::jittered(double angle) {
  if (jitter_sigma_ == 0.0) return angle;
  return angle + std::normal_distribution<double>(0.0, jitter_sigma_)(jitter_rng_);
}

void ClientCapability::apply_program(const PlateProgram& program, TransitBatch& batch) {
  std::array<PlateAngle, 4> actual;
  for (std::size_t i = 0; i < program.plates.size(); ++i) {
    actual[i] = PlateAngle(jittered(program.plates[i].radians()));
  }
  batch.transform(cumulative_operator(actual));
}

void ClientCapability::apply_u(TransitBatch& batch) {
  batch.transform(ry(jittered(std::numbers::pi / 2)));
}

void ClientCapability::apply_u_dagger(TransitBatch& batch) {
  batch.transform(ry(-jittered(std::numbers::pi / 2)));
}

void ClientCapability::apply_x(TransitBatch& batch) { batch.transform(Operator2::pauli_x()); }

bool client_transform_abstract(TransitBatch& batch, bool a, bool b, ClientCapability& cap) {
  const bool r = cap.fresh_random_bit();
  if (a) cap.apply_u(batch);
  if (b) cap.apply_u(batch);
  if (ClientCapability::parity(a, b)) cap.apply_u_dagger(batch);
  if (r) cap.apply_x(batch);
  return r;
}

bool client_transform_plates(TransitBatch& batch, bool a, bool b, ClientCapability& cap) {
  const bool r = cap.fresh_random_bit();
  cap.apply_program(ClientCapability::select_program({a, b, r}), batch);
  return r;
}

TransitBatch server_prepare(std::size_t n_copies) {
  if (n_copies == 0) throw std::invalid_argument("server_prepare: n_copies must be >= 1");
  return Channel::launch(std::vector<CobitState>(n_copies, basis_state(0)));
}

Measurement server_measure(const TransitBatch& batch, const NoiseModel& detector,
                           double window_s, Rng& rng) {
  Measurement m;
  m.clicks = detect(Channel::view(batch), detector, window_s, rng);
  if (m.clicks.total() == 0) return m;
  if (m.clicks.ones == m.clicks.zeros) {
    m.s = std::bernoulli_distribution(0.5)(rng);
  } else {
    m.s = m.clicks.ones > m.clicks.zeros;
  }
  return m;
}

void RoundConfig::validate() const {
  noise.validate();
  source.validate();
  if (source.kind == SourceKind::kIdeal && n_copies == 0) {
    throw std::invalid_argument("RoundConfig: n_copies must be >= 1");
  }
  if (!std::isfinite(elapsed_min)) throw std::invalid_argument("RoundConfig: bad elapsed time");
}

RoundResult run_round(bool a, bool b, const RoundConfig& config) {
  config.validate();
  Rng channel_rng = make_rng(config.seed, Stream::kChannel);
  Rng server_rng = make_rng(config.seed, Stream::kServer);
  ClientCapability cap(config.seed, config.noise.plate_jitter_sigma, config.forced_pad);

  RoundResult result;
  RoundTranscript& t = result.transcript;
  t.a = a;
  t.b = b;
  t.mode = config.mode;

  std::size_t n = config.n_copies;
  switch (config.source.kind) {
    case SourceKind::kIdeal:
      break;
    case SourceKind::kHeralded:
      n = 1;
      break;
    case SourceKind::kCoherent: {
      const double mean = coherent_launch_mean(config.source, config.noise);
      n = mean > 0.0 ? std::poisson_distribution<std::size_t>(mean)(server_rng) : 0;
      break;
    }
  }
  t.n_copies = n;

  TransitBatch batch = n > 0 ? server_prepare(n) : Channel::launch({});
  t.t_prepared = now_ticks();
  if (config.record_states) {
    auto v = Channel::view(batch);
    t.prepared.assign(v.begin(), v.end());
  }

  const double drift = config.noise.drift.sample(config.elapsed_min, channel_rng);
  Channel::propagate(batch, drift, 0.0, channel_rng);

  t.r = config.mode == Mode::kAbstract ? client_transform_abstract(batch, a, b, cap)
                                       : client_transform_plates(batch, a, b, cap);
  t.t_transformed = now_ticks();

  Channel::propagate(batch, drift, config.noise.loss_prob, channel_rng);
  if (config.record_states) {
    auto v = Channel::view(batch);
    t.returned.assign(v.begin(), v.end());
  }

  const Measurement m = server_measure(batch, config.noise, config.source.window_s, server_rng);
  t.t_measured = now_ticks();
  t.clicks = m.clicks;
  t.s = m.s;
  if (m.s) t.decoded = client_decode(*m.s, t.r);
  result.decoded = t.decoded;
  return result;
}

}  // namespace cobit
