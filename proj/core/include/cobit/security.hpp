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

// Blindness checks: the server's view, averaged over the client's pad, does
// not depend on the client's inputs. Exact checks work on the client's map
// family; the adversary harness works on sampled rounds.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cobit/circuit.hpp"
#include "cobit/photostat.hpp"
#include "cobit/protocol.hpp"
#include "cobit/state.hpp"

namespace cobit {

/// The client's composite map for (a, b, r): the cumulative plate operator in
/// plate mode, X^r (U^dagger)^(a^b) U^b U^a in abstract mode.
Operator2 client_map(bool a, bool b, bool r, Mode mode);

/// (1/2) sum_r |psi(a,b,r)><psi(a,b,r)| with psi = client_map * probe. With
/// `pad` false the pad is pinned to r = 0 (negative control).
DensityMatrix averaged_view(bool a, bool b, Mode mode, bool pad = true,
                            const CobitState& probe = CobitState{});

/// Phase-canonical outputs for r = 0 and r = 1.
std::array<CobitState, 2> view_multiset(bool a, bool b, Mode mode, bool pad = true,
                                        const CobitState& probe = CobitState{});

/// Equality of two-element multisets of n-copy product states, up to a
/// global phase per element: overlaps compared as |<x|y>|^n >= 1 - tol.
bool multisets_equal(const std::array<CobitState, 2>& lhs, const std::array<CobitState, 2>& rhs,
                     std::size_t n_copies = 1, double tol = kAlgebraTol);

struct MultiCopyVerdict {
  bool pass = false;
  std::size_t n_copies = 1;
  /// Exact trace distance between pad-averaged n-copy ensembles, maximized
  /// over input pairs; computed only for n_copies <= kExactCopyLimit.
  std::optional<double> max_exact_distance;
  /// Description of the first mismatching pair, empty on pass.
  std::string witness;

  static constexpr std::size_t kExactCopyLimit = 6;
};

/// Checks that the pad-averaged n-copy views coincide across all four inputs.
MultiCopyVerdict multi_copy_view(std::size_t n_copies, Mode mode, bool pad = true,
                                 const CobitState& probe = CobitState{}, double tol = 1e-9);

struct ProbeVerdict {
  bool pass = false;
  std::size_t n_probes = 0;
  /// Max over probes and input pairs of the averaged-view trace distance.
  double max_trace_distance = 0.0;
  bool multisets_equal = false;
};

/// Substitutes `n_probes` Haar-random states (plus (|0>+i|1>)/sqrt2) for |0>.
ProbeVerdict probe_states_check(std::size_t n_probes, std::uint64_t seed, Mode mode,
                                bool pad = true, double tol = kAlgebraTol);

struct BlindnessReport {
  Mode mode = Mode::kPlates;
  bool pad_enabled = true;
  double tolerance = kAlgebraTol;
  /// Indexed by 2a + b.
  std::array<DensityMatrix, 4> averaged{DensityMatrix::maximally_mixed(),
                                        DensityMatrix::maximally_mixed(),
                                        DensityMatrix::maximally_mixed(),
                                        DensityMatrix::maximally_mixed()};
  std::array<std::array<double, 4>, 4> pairwise{};
  double max_trace_distance = 0.0;
  /// Max trace distance from I/2.
  double max_deviation_from_mixed = 0.0;
  bool multisets_equal = false;
  MultiCopyVerdict multi_copy;
  ProbeVerdict probes;
  /// Informational: client_map(a,b,r) = sign * I or sign * J, J = [[0,-1],[1,0]],
  /// as "+I", "-J", ... indexed [2a+b][r]; "other" when neither fits.
  std::array<std::array<std::string, 2>, 4> global_signs;
  /// Attacks that change how the plates act (frequency / mode mismatch) are
  /// not simulated.
  bool mode_mismatch_modeled = false;

  /// max_trace_distance <= tolerance and max_deviation_from_mixed <= tolerance.
  bool pass = false;
  /// pass plus the multiset, multi-copy and probe checks.
  bool all_checks_pass = false;
};

struct AuditOptions {
  Mode mode = Mode::kPlates;
  bool pad = true;
  std::size_t copies = 1;
  std::size_t n_probes = 50;
  std::uint64_t seed = 0;
  double tolerance = kAlgebraTol;
};

BlindnessReport audit_blindness(const AuditOptions& options);

/// JSON rendering of the report.
std::string to_json(const BlindnessReport& report, int indent = 2);

/// Monte Carlo estimate of the pad-averaged state arriving back at the server
/// for fixed inputs, one sampled copy per surviving round.
DensityMatrix estimated_view(bool a, bool b, const RoundConfig& config, std::uint64_t n_rounds);

/// What a curious server has after one round. Returned states are phase
/// canonical: the detection model cannot observe a global phase.
struct ServerObservation {
  Outcome s;
  ClickCounts clicks;
  std::vector<CobitState> returned;
  /// Only a deliberately broken harness sets this (sanity check).
  std::optional<bool> leaked_pad;
};

struct Guess {
  std::optional<std::pair<bool, bool>> inputs;
  std::optional<bool> and_value;
};

/// Guesses the current (last) round from the whole observation history.
using Strategy = std::function<Guess(std::span<const ServerObservation> history)>;

struct NamedStrategy {
  std::string name;
  Strategy strategy;
};

/// Strategies that see only what a real server sees.
std::vector<NamedStrategy> builtin_strategies();
/// AND(a,b) = s ^ r, using the leaked pad.
Strategy leaked_pad_strategy();

struct AdversaryResult {
  std::uint64_t rounds = 0;
  /// Accuracies with binomial standard errors.
  EstimateWithError inputs_accuracy;
  EstimateWithError and_accuracy;
};

struct RoundTruth {
  bool a = false;
  bool b = false;
};

/// Scores `strategy` over recorded observations against the true inputs.
AdversaryResult score_strategy(const Strategy& strategy,
                               std::span<const ServerObservation> observations,
                               std::span<const RoundTruth> truths);

/// Uniform (a, b) per round, fresh pad per round, observations fed to the
/// strategy. `leak_pad` exposes r in the observation.
AdversaryResult adversary_guess_experiment(const Strategy& strategy, std::uint64_t n_rounds,
                                           std::uint64_t seed, const RoundConfig& base = {},
                                           bool leak_pad = false);

struct CompositionCheck {
  std::uint64_t evaluations = 0;
  std::size_t rounds_per_evaluation = 0;
  /// Total variation distance between the empirical distributions of the
  /// server's outcome sequences for the two input assignments.
  double total_variation = 0.0;
  /// Max |z| of any single outcome pattern against the uniform distribution.
  double max_pattern_z = 0.0;
};

/// Runs the plan `n_evals` times on each input assignment and compares the
/// server-visible outcome sequences.
CompositionCheck compare_evaluation_views(const DelegationPlan& plan, const Bits& inputs_x,
                                          const Bits& inputs_y, std::uint64_t n_evals,
                                          const RoundConfig& base);

}  // namespace cobit
