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

// Client and server roles for one delegated-NAND round.
//
// The client never sees amplitudes and never measures: it only holds a
// ClientCapability (parity, fresh random bits, plate-program selection and the
// abstract U / U^dagger / X moves) and opaque TransitBatch handles. Reading
// states is reserved to the Channel, which is what the server and the wire
// layer sit behind.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cobit/noise.hpp"
#include "cobit/plates.hpp"
#include "cobit/state.hpp"

namespace cobit {

enum class Mode : std::uint8_t { kAbstract, kPlates };

std::string_view to_string(Mode mode);
/// Throws std::invalid_argument on anything but "abstract" / "plates".
Mode parse_mode(std::string_view text);

/// A conclusive bit, or nullopt when no event was registered.
using Outcome = std::optional<bool>;

/// Cobits in flight. Opaque to the client.
class TransitBatch {
 public:
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }

 private:
  explicit TransitBatch(std::vector<CobitState> states) : states_(std::move(states)) {}
  void transform(const Operator2& op);

  std::vector<CobitState> states_;

  friend class Channel;
  friend class ClientCapability;
};

/// The physical link between the roles and the only reader of TransitBatch.
class Channel {
 public:
  static TransitBatch launch(std::vector<CobitState> states);
  static std::span<const CobitState> view(const TransitBatch& batch);
  /// Rotates every copy by `drift_angle`, then drops each copy with
  /// probability `loss_prob`.
  static void propagate(TransitBatch& batch, double drift_angle, double loss_prob, Rng& rng);
};

/// Everything the client is allowed to do.
class ClientCapability {
 public:
  /// `jitter_sigma` perturbs every plate angle (or abstract rotation angle)
  /// once per round. `forced_pad` pins the pad bit for tests and audits.
  explicit ClientCapability(std::uint64_t seed, double jitter_sigma = 0.0,
                            std::optional<bool> forced_pad = std::nullopt);

  static bool parity(bool x, bool y) { return x != y; }

  /// Fresh uniform bit, drawn anew on every call.
  bool fresh_random_bit();
  std::uint64_t pads_drawn() const { return pads_drawn_; }

  static PlateProgram select_program(const ClientInputs& inputs) {
    return compile_nand_program(inputs);
  }
  void apply_program(const PlateProgram& program, TransitBatch& batch);

  /// U = ry(pi/2).
  void apply_u(TransitBatch& batch);
  void apply_u_dagger(TransitBatch& batch);
  void apply_x(TransitBatch& batch);

 private:
  double jittered(double angle);

  Rng pad_rng_;
  Rng jitter_rng_;
  double jitter_sigma_;
  std::optional<bool> forced_pad_;
  std::uint64_t pads_drawn_ = 0;
};

/// Encodes X^r (U^dagger)^(a^b) U^b U^a on every copy; returns the pad r.
bool client_transform_abstract(TransitBatch& batch, bool a, bool b, ClientCapability& cap);

/// Applies the compiled four-plate program for (a, b, r); returns the pad r.
bool client_transform_plates(TransitBatch& batch, bool a, bool b, ClientCapability& cap);

/// s ^ 1 ^ r.
inline bool client_decode(bool s, bool r) { return s == r; }

/// n_copies copies of |0>. Throws std::invalid_argument if n_copies == 0.
TransitBatch server_prepare(std::size_t n_copies);

struct Measurement {
  Outcome s;
  ClickCounts clicks;
};

/// Measures every arriving copy; s is the majority of registered clicks, a
/// fair coin on ties, inconclusive with no clicks.
Measurement server_measure(const TransitBatch& batch, const NoiseModel& detector,
                           double window_s, Rng& rng);

struct RoundConfig {
  Mode mode = Mode::kPlates;
  std::size_t n_copies = 1;
  SourceModel source;
  NoiseModel noise;
  std::uint64_t seed = 0;
  std::optional<bool> forced_pad;
  double elapsed_min = 0.0;
  bool record_states = false;

  void validate() const;
};

struct RoundTranscript {
  bool a = false;
  bool b = false;
  bool r = false;
  std::size_t n_copies = 0;
  Outcome s;
  Outcome decoded;
  Mode mode = Mode::kPlates;
  ClickCounts clicks;
  /// steady_clock ticks at prepare / transform / measure.
  std::int64_t t_prepared = 0;
  std::int64_t t_transformed = 0;
  std::int64_t t_measured = 0;
  /// Filled only with RoundConfig::record_states: states sent by the server
  /// and states arriving back at the server.
  std::vector<CobitState> prepared;
  std::vector<CobitState> returned;
};

struct RoundResult {
  Outcome decoded;
  RoundTranscript transcript;
};

/// prepare -> forward channel -> client transform -> return channel ->
/// measure -> decode. Deterministic given config.seed.
RoundResult run_round(bool a, bool b, const RoundConfig& config);

inline bool nand(bool a, bool b) { return !(a && b); }

}  // namespace cobit
