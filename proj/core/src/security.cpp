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

#include "cobit/security.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cobit/rng.hpp"
#include "json.hpp"

namespace cobit {
namespace {

constexpr std::array<std::pair<bool, bool>, 4> kInputs{{{false, false}, {false, true},
                                                         {true, false}, {true, true}}};

std::array<CobitState, 2> raw_outputs(bool a, bool b, Mode mode, bool pad,
                                      const CobitState& probe) {
  return {apply(client_map(a, b, false, mode), probe),
          apply(client_map(a, b, pad, mode), probe)};
}

// |<x|y>|.
double overlap(const CobitState& x, const CobitState& y) {
  return std::abs(std::conj(x.amp0()) * y.amp0() + std::conj(x.amp1()) * y.amp1());
}

Eigen::VectorXcd product_state(const CobitState& s, std::size_t n) {
  Eigen::VectorXcd v(1);
  v(0) = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * s.amp0();
      next(2 * i + 1) = v(i) * s.amp1();
    }
    v = std::move(next);
  }
  return v;
}

Eigen::MatrixXcd n_copy_ensemble(const std::array<CobitState, 2>& outputs, std::size_t n) {
  const Eigen::VectorXcd v0 = product_state(outputs[0], n);
  const Eigen::VectorXcd v1 = product_state(outputs[1], n);
  return 0.5 * (v0 * v0.adjoint() + v1 * v1.adjoint());
}

double exact_trace_distance(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(lhs - rhs, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

CobitState haar_state(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const Complex a0(g(rng), g(rng));
    const Complex a1(g(rng), g(rng));
    if (std::norm(a0) + std::norm(a1) > 1e-12) return CobitState::normalized(a0, a1);
  }
}

std::string sign_label(const Operator2& m) {
  const Operator2 j{0.0, -1.0, 1.0, 0.0};
  for (const auto& [name, ref] : {std::pair{"I", Operator2::identity()}, std::pair{"J", j}}) {
    if (!equal_up_to_global_phase(ref, m, 1e-9)) continue;
    const Complex c = relative_phase(ref, m);
    if (std::abs(c - 1.0) < 1e-9) return std::string("+") + name;
    if (std::abs(c + 1.0) < 1e-9) return std::string("-") + name;
    std::ostringstream out;
    out << "exp(" << std::arg(c) << "i)" << name;
    return out.str();
  }
  return "other";
}

nlohmann::json density_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 2; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 2; ++j) row.push_back({rho(i, j).real(), rho(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

EstimateWithError binomial_estimate(std::uint64_t hits, std::uint64_t n) {
  EstimateWithError e;
  e.n = n;
  if (n == 0) return e;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  return e;
}

}  // namespace

Operator2 client_map(bool a, bool b, bool r, Mode mode) {
  if (mode == Mode::kPlates) return cumulative_operator(compile_nand_program({a, b, r}));
  const Operator2 u = ry(std::numbers::pi / 2);
  Operator2 m = Operator2::identity();
  if (a) m = u * m;
  if (b) m = u * m;
  if (a != b) m = u.dagger() * m;
  if (r) m = Operator2::pauli_x() * m;
  return m;
}

DensityMatrix averaged_view(bool a, bool b, Mode mode, bool pad, const CobitState& probe) {
  const auto outs = raw_outputs(a, b, mode, pad, probe);
  return DensityMatrix::uniform_mixture(outs);
}

std::array<CobitState, 2> view_multiset(bool a, bool b, Mode mode, bool pad,
                                        const CobitState& probe) {
  const auto outs = raw_outputs(a, b, mode, pad, probe);
  return {outs[0].canonical_phase(), outs[1].canonical_phase()};
}

bool multisets_equal(const std::array<CobitState, 2>& lhs, const std::array<CobitState, 2>& rhs,
                     std::size_t n_copies, double tol) {
  const double n = static_cast<double>(n_copies);
  auto same = [&](const CobitState& x, const CobitState& y) {
    return std::pow(overlap(x, y), n) >= 1.0 - tol;
  };
  return (same(lhs[0], rhs[0]) && same(lhs[1], rhs[1])) ||
         (same(lhs[0], rhs[1]) && same(lhs[1], rhs[0]));
}

MultiCopyVerdict multi_copy_view(std::size_t n_copies, Mode mode, bool pad,
                                 const CobitState& probe, double tol) {
  if (n_copies == 0) throw std::invalid_argument("multi_copy_view: n must be >= 1");
  MultiCopyVerdict v;
  v.n_copies = n_copies;
  v.pass = true;
  std::array<std::array<CobitState, 2>, 4> sets;
  for (std::size_t i = 0; i < 4; ++i) {
    sets[i] = view_multiset(kInputs[i].first, kInputs[i].second, mode, pad, probe);
  }
  for (std::size_t i = 0; i < 4 && v.pass; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (!multisets_equal(sets[i], sets[j], n_copies, tol)) {
        v.pass = false;
        std::ostringstream w;
        w << "inputs " << kInputs[i].first << kInputs[i].second << " vs " << kInputs[j].first
          << kInputs[j].second << ": {" << sets[i][0].str() << ", " << sets[i][1].str()
          << "} != {" << sets[j][0].str() << ", " << sets[j][1].str() << "}";
        v.witness = w.str();
        break;
      }
    }
  }
  if (n_copies <= MultiCopyVerdict::kExactCopyLimit) {
    std::array<Eigen::MatrixXcd, 4> rho;
    for (std::size_t i = 0; i < 4; ++i) {
      rho[i] = n_copy_ensemble(raw_outputs(kInputs[i].first, kInputs[i].second, mode, pad, probe),
                               n_copies);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        worst = std::max(worst, exact_trace_distance(rho[i], rho[j]));
      }
    }
    v.max_exact_distance = worst;
    if (worst > tol) v.pass = false;
  }
  return v;
}

ProbeVerdict probe_states_check(std::size_t n_probes, std::uint64_t seed, Mode mode, bool pad,
                                double tol) {
  ProbeVerdict v;
  v.multisets_equal = true;
  Rng rng = make_rng(seed, Stream::kServer, 0x9b0be);
  std::vector<CobitState> probes;
  probes.push_back(CobitState::normalized(1.0, Complex(0.0, 1.0)));
  for (std::size_t k = 0; k < n_probes; ++k) probes.push_back(haar_state(rng));
  v.n_probes = probes.size();

  for (const CobitState& probe : probes) {
    std::array<DensityMatrix, 4> views{DensityMatrix::maximally_mixed(),
                                       DensityMatrix::maximally_mixed(),
                                       DensityMatrix::maximally_mixed(),
                                       DensityMatrix::maximally_mixed()};
    std::array<std::array<CobitState, 2>, 4> sets;
    for (std::size_t i = 0; i < 4; ++i) {
      views[i] = averaged_view(kInputs[i].first, kInputs[i].second, mode, pad, probe);
      sets[i] = view_multiset(kInputs[i].first, kInputs[i].second, mode, pad, probe);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        v.max_trace_distance = std::max(v.max_trace_distance, trace_distance(views[i], views[j]));
        if (!multisets_equal(sets[i], sets[j], 1, 1e-9)) v.multisets_equal = false;
      }
    }
  }
  v.pass = v.max_trace_distance <= tol && v.multisets_equal;
  return v;
}

BlindnessReport audit_blindness(const AuditOptions& options) {
  BlindnessReport rep;
  rep.mode = options.mode;
  rep.pad_enabled = options.pad;
  rep.tolerance = options.tolerance;

  std::array<std::array<CobitState, 2>, 4> sets;
  const DensityMatrix mixed = DensityMatrix::maximally_mixed();
  for (std::size_t i = 0; i < 4; ++i) {
    const auto [a, b] = kInputs[i];
    rep.averaged[i] = averaged_view(a, b, options.mode, options.pad);
    sets[i] = view_multiset(a, b, options.mode, options.pad);
    rep.max_deviation_from_mixed =
        std::max(rep.max_deviation_from_mixed, trace_distance(rep.averaged[i], mixed));
    for (int r = 0; r < 2; ++r) {
      rep.global_signs[i][r] = sign_label(client_map(a, b, r == 1 && options.pad, options.mode));
    }
  }
  rep.multisets_equal = true;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      rep.pairwise[i][j] = trace_distance(rep.averaged[i], rep.averaged[j]);
      rep.max_trace_distance = std::max(rep.max_trace_distance, rep.pairwise[i][j]);
      if (!multisets_equal(sets[i], sets[j])) rep.multisets_equal = false;
    }
  }
  rep.multi_copy = multi_copy_view(std::max<std::size_t>(options.copies, 1), options.mode,
                                   options.pad);
  rep.probes = probe_states_check(options.n_probes, options.seed, options.mode, options.pad,
                                  options.tolerance);
  rep.pass = rep.max_trace_distance <= options.tolerance &&
             rep.max_deviation_from_mixed <= options.tolerance;
  rep.all_checks_pass = rep.pass && rep.multisets_equal && rep.multi_copy.pass && rep.probes.pass;
  return rep;
}

std::string to_json(const BlindnessReport& rep, int indent) {
  using nlohmann::json;
  json j;
  j["mode"] = std::string(to_string(rep.mode));
  j["pad_enabled"] = rep.pad_enabled;
  j["tolerance"] = rep.tolerance;
  json views = json::object();
  json signs = json::object();
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string key = std::to_string(kInputs[i].first) + std::to_string(kInputs[i].second);
    views[key] = density_json(rep.averaged[i]);
    signs[key] = {{"r0", rep.global_signs[i][0]}, {"r1", rep.global_signs[i][1]}};
  }
  j["averaged_views"] = views;
  j["pairwise_trace_distance"] = rep.pairwise;
  j["max_trace_distance"] = rep.max_trace_distance;
  j["max_deviation_from_mixed"] = rep.max_deviation_from_mixed;
  j["multisets_equal"] = rep.multisets_equal;
  json mc = {{"pass", rep.multi_copy.pass},
             {"copies", rep.multi_copy.n_copies},
             {"witness", rep.multi_copy.witness}};
  mc["max_exact_distance"] =
      rep.multi_copy.max_exact_distance ? json(*rep.multi_copy.max_exact_distance) : json(nullptr);
  j["multi_copy"] = mc;
  j["probe_states"] = {{"pass", rep.probes.pass},
                       {"probes", rep.probes.n_probes},
                       {"max_trace_distance", rep.probes.max_trace_distance},
                       {"multisets_equal", rep.probes.multisets_equal}};
  j["global_signs_informational"] = signs;
  j["mode_mismatch_attacks"] = rep.mode_mismatch_modeled ? "modeled" : "not modeled";
  j["pass"] = rep.pass;
  j["all_checks_pass"] = rep.all_checks_pass;
  return j.dump(indent) + "\n";
}

DensityMatrix estimated_view(bool a, bool b, const RoundConfig& config, std::uint64_t n_rounds) {
  std::vector<CobitState> returned;
  returned.reserve(n_rounds);
  RoundConfig cfg = config;
  cfg.record_states = true;
  for (std::uint64_t i = 0; i < n_rounds; ++i) {
    cfg.seed = derive_seed(config.seed, Stream::kTrial, i);
    const RoundResult rr = run_round(a, b, cfg);
    if (!rr.transcript.returned.empty()) returned.push_back(rr.transcript.returned.front());
  }
  if (returned.empty()) throw std::runtime_error("estimated_view: no copy survived");
  return DensityMatrix::uniform_mixture(returned);
}

std::vector<NamedStrategy> builtin_strategies() {
  std::vector<NamedStrategy> out;
  out.push_back({"outcome-direct", [](std::span<const ServerObservation> h) {
                   const bool s = h.back().s.value_or(false);
                   return Guess{std::pair{s, s}, s};
                 }});
  out.push_back({"outcome-inverted", [](std::span<const ServerObservation> h) {
                   const bool s = h.back().s.value_or(false);
                   return Guess{std::pair{!s, false}, !s};
                 }});
  out.push_back({"returned-state", [](std::span<const ServerObservation> h) {
                   const auto& obs = h.back();
                   const bool vertical = !obs.returned.empty() && obs.returned[0].prob1() > 0.5;
                   return Guess{std::pair{true, vertical}, vertical};
                 }});
  out.push_back({"amplitude-phase", [](std::span<const ServerObservation> h) {
                   // Looks for a sign on the vertical amplitude.
                   const auto& obs = h.back();
                   const bool negative = !obs.returned.empty() &&
                                         obs.returned[0].amp1().real() < -1e-9;
                   const bool s = obs.s.value_or(false);
                   if (negative) return Guess{std::pair{true, true}, true};
                   return Guess{std::pair{s, !s}, s};
                 }});
  out.push_back({"history-parity", [](std::span<const ServerObservation> h) {
                   const bool cur = h.back().s.value_or(false);
                   const bool prev = h.size() > 1 ? h[h.size() - 2].s.value_or(false) : false;
                   return Guess{std::pair{prev, cur}, prev != cur};
                 }});
  out.push_back({"click-count", [](std::span<const ServerObservation> h) {
                   const auto& c = h.back().clicks;
                   const bool more_ones = c.ones > c.zeros;
                   const bool odd = (c.total() & 1U) != 0;
                   return Guess{std::pair{odd, more_ones}, more_ones};
                 }});
  return out;
}

Strategy leaked_pad_strategy() {
  return [](std::span<const ServerObservation> h) {
    const auto& obs = h.back();
    const bool s = obs.s.value_or(false);
    return Guess{std::nullopt, s != obs.leaked_pad.value_or(false)};
  };
}

AdversaryResult score_strategy(const Strategy& strategy,
                               std::span<const ServerObservation> observations,
                               std::span<const RoundTruth> truths) {
  if (observations.size() != truths.size()) {
    throw std::invalid_argument("score_strategy: observation / truth length mismatch");
  }
  std::uint64_t input_guesses = 0, input_hits = 0, and_guesses = 0, and_hits = 0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const Guess g = strategy(observations.first(i + 1));
    const RoundTruth& t = truths[i];
    if (g.inputs) {
      ++input_guesses;
      if (g.inputs->first == t.a && g.inputs->second == t.b) ++input_hits;
    }
    if (g.and_value) {
      ++and_guesses;
      if (*g.and_value == (t.a && t.b)) ++and_hits;
    }
  }
  AdversaryResult res;
  res.rounds = observations.size();
  res.inputs_accuracy = binomial_estimate(input_hits, input_guesses);
  res.and_accuracy = binomial_estimate(and_hits, and_guesses);
  return res;
}

AdversaryResult adversary_guess_experiment(const Strategy& strategy, std::uint64_t n_rounds,
                                           std::uint64_t seed, const RoundConfig& base,
                                           bool leak_pad) {
  std::vector<ServerObservation> observations;
  std::vector<RoundTruth> truths;
  observations.reserve(n_rounds);
  truths.reserve(n_rounds);
  RoundConfig cfg = base;
  cfg.record_states = true;
  for (std::uint64_t i = 0; i < n_rounds; ++i) {
    const std::uint64_t w = mix64(derive_seed(seed, Stream::kInputs, i));
    const bool a = (w & 1U) != 0;
    const bool b = (w & 2U) != 0;
    cfg.seed = derive_seed(seed, Stream::kTrial, i);
    const RoundResult rr = run_round(a, b, cfg);
    ServerObservation obs;
    obs.s = rr.transcript.s;
    obs.clicks = rr.transcript.clicks;
    for (const auto& st : rr.transcript.returned) obs.returned.push_back(st.canonical_phase());
    if (leak_pad) obs.leaked_pad = rr.transcript.r;
    observations.push_back(std::move(obs));
    truths.push_back({a, b});
  }
  return score_strategy(strategy, observations, truths);
}

CompositionCheck compare_evaluation_views(const DelegationPlan& plan, const Bits& inputs_x,
                                          const Bits& inputs_y, std::uint64_t n_evals,
                                          const RoundConfig& base) {
  CompositionCheck check;
  check.evaluations = n_evals;
  check.rounds_per_evaluation = plan.delegated_rounds();
  if (check.rounds_per_evaluation > 16) {
    throw std::invalid_argument("compare_evaluation_views: at most 16 delegated rounds");
  }
  const std::size_t n_patterns = std::size_t{1} << check.rounds_per_evaluation;

  auto histogram = [&](const Bits& inputs, std::uint64_t stream_offset) {
    std::vector<std::uint64_t> counts(n_patterns, 0);
    for (std::uint64_t e = 0; e < n_evals; ++e) {
      RoundConfig cfg = base;
      cfg.seed = derive_seed(base.seed, Stream::kSession, stream_offset + e);
      EvalTrace trace;
      evaluate_delegated(plan, inputs, in_process_oracle(cfg), &trace);
      std::size_t pattern = 0;
      for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        if (trace.rounds[k].s.value_or(false)) pattern |= std::size_t{1} << k;
      }
      ++counts[pattern];
    }
    return counts;
  };
  const auto hx = histogram(inputs_x, 0);
  const auto hy = histogram(inputs_y, 1ULL << 40);

  const double n = static_cast<double>(n_evals);
  const double p = 1.0 / static_cast<double>(n_patterns);
  const double sigma = std::sqrt(n * p * (1.0 - p));
  for (std::size_t k = 0; k < n_patterns; ++k) {
    check.total_variation += 0.5 * std::abs(static_cast<double>(hx[k]) - static_cast<double>(hy[k])) / n;
    if (sigma > 0.0) {
      for (const auto* h : {&hx, &hy}) {
        const double z = std::abs(static_cast<double>((*h)[k]) - n * p) / sigma;
        check.max_pattern_z = std::max(check.max_pattern_z, z);
      }
    }
  }
  return check;
}

}  // namespace cobit
