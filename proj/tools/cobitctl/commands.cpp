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

#include "commands.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <ctime>
#include <iostream>
#include <thread>
#include <tuple>

#include "cobit/circuit.hpp"
#include "cobit/net.hpp"
#include "cobit/photostat.hpp"
#include "cobit/protocol.hpp"
#include "cobit/rng.hpp"
#include "cobit/security.hpp"
#include "output.hpp"

namespace cobitctl {
namespace {

using cobit::RunConfig;

Sink open_sink(const RunConfig& cfg) { return Sink(cfg.output, parse_format(cfg.format)); }

std::string bit(bool v) { return v ? "1" : "0"; }

std::string outcome(const cobit::Outcome& o) { return o ? bit(*o) : "none"; }

std::string count(std::uint64_t n) { return std::to_string(n); }

std::string bit_string(const cobit::Bits& bits) {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

// Same derivation as the Monte Carlo engine uses for uniform inputs.
std::pair<bool, bool> uniform_inputs(std::uint64_t seed, std::uint64_t i) {
  const std::uint64_t w = cobit::mix64(cobit::derive_seed(seed, cobit::Stream::kInputs, i));
  return {(w & 1U) != 0, (w & 2U) != 0};
}

cobit::Bits parse_assignment(const cobit::BoolCircuit& circuit, const std::string& text) {
  const std::size_t n = circuit.inputs.size();
  cobit::Bits bits(n, 0);
  if (text.find('=') == std::string::npos) {
    if (text.size() != n || text.find_first_not_of("01") != std::string::npos) {
      throw UsageError("--inputs: expected " + std::to_string(n) +
                       " binary digits in INPUT order, got '" + text + "'");
    }
    for (std::size_t i = 0; i < n; ++i) bits[i] = text[i] == '1';
    return bits;
  }
  std::vector<bool> seen(n, false);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--inputs: bad item '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const auto it = std::find(circuit.inputs.begin(), circuit.inputs.end(), name);
    if (it == circuit.inputs.end()) throw UsageError("--inputs: unknown input '" + name + "'");
    if (value != "0" && value != "1") {
      throw UsageError("--inputs: value of '" + name + "' must be 0 or 1");
    }
    const auto idx = static_cast<std::size_t>(it - circuit.inputs.begin());
    if (seen[idx]) throw UsageError("--inputs: '" + name + "' assigned twice");
    seen[idx] = true;
    bits[idx] = value == "1";
    pos = comma + 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw UsageError("--inputs: missing value for '" + circuit.inputs[i] + "'");
  }
  return bits;
}

}  // namespace

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty() ? RunConfig{} : cobit::load_run_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.mode) cfg.mode = cobit::parse_mode(*flags.mode);
  if (flags.copies) {
    if (*flags.copies == 0) throw UsageError("--copies must be >= 1");
    cfg.copies = *flags.copies;
  }
  if (flags.trials) {
    if (*flags.trials == 0) throw UsageError("--trials must be >= 1");
    cfg.trials = *flags.trials;
  }
  if (flags.out) cfg.output = *flags.out;
  if (flags.format) cfg.format = *flags.format;
  parse_format(cfg.format);
  cfg.round_config().validate();
  return cfg;
}

int cmd_round(const RunConfig& cfg, const RoundArgs& args) {
  cobit::RoundConfig rc = cfg.round_config();
  rc.seed = cfg.require_seed();
  const cobit::RoundResult rr = cobit::run_round(args.a, args.b, rc);
  const cobit::RoundTranscript& t = rr.transcript;

  Sink sink = open_sink(cfg);
  Table table{{"a", "b", "r", "copies", "s", "decoded", "expected", "zeros", "ones"}, {}};
  table.add({bit(t.a), bit(t.b), bit(t.r), count(t.n_copies), outcome(t.s),
             rr.decoded ? bit(*rr.decoded) : "inconclusive", bit(cobit::nand(t.a, t.b)),
             count(t.clicks.zeros), count(t.clicks.ones)});
  sink.table(table);
  return kExitOk;
}

int cmd_truth_table(const RunConfig& cfg) {
  const std::uint64_t seed = cfg.require_seed();
  Sink sink = open_sink(cfg);
  Table table{{"a", "b", "r", "trials", "conclusive", "success", "stderr", "inconclusive",
               "inconclusive_stderr"},
              {}};
  std::array<std::uint64_t, 2> correct{};
  std::array<std::uint64_t, 2> conclusive{};
  std::uint64_t cell = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int r = 0; r < 2; ++r, ++cell) {
        cobit::RoundConfig rc = cfg.round_config();
        rc.forced_pad = r == 1;
        rc.seed = cobit::derive_seed(seed, cobit::Stream::kTrial, 0x7ab1e000ULL + cell);
        const cobit::SuccessEstimate est = cobit::estimate_success(a, b, rc, cfg.trials);
        correct[r] += est.correct;
        conclusive[r] += est.conclusive;
        table.add({bit(a), bit(b), bit(r), count(est.trials), count(est.conclusive),
                   fixed(est.success.p_hat), fixed(est.success.std_error),
                   fixed(est.inconclusive.p_hat), fixed(est.inconclusive.std_error)});
      }
    }
  }
  sink.table(table);
  auto summary = [](std::uint64_t k, std::uint64_t n) {
    const cobit::EstimateWithError e = cobit::poisson_estimate(k, n);
    return fixed(e.p_hat) + " +- " + fixed(e.std_error);
  };
  sink.note("mean_success", summary(correct[0] + correct[1], conclusive[0] + conclusive[1]));
  sink.note("mean_success_r0", summary(correct[0], conclusive[0]));
  sink.note("mean_success_r1", summary(correct[1], conclusive[1]));
  return kExitOk;
}

int cmd_stability(const RunConfig& cfg) {
  cobit::RoundConfig rc = cfg.round_config();
  rc.seed = cfg.require_seed();
  const auto series =
      cobit::stability_series(rc, cfg.duration_min, cfg.stability_points, cfg.trials);
  Sink sink = open_sink(cfg);
  Table table{{"elapsed_min", "trials", "conclusive", "success", "stderr"}, {}};
  for (const cobit::StabilityPoint& p : series) {
    table.add({fixed(p.elapsed_min, 3), count(p.estimate.trials), count(p.estimate.conclusive),
               fixed(p.estimate.success.p_hat), fixed(p.estimate.success.std_error)});
  }
  sink.table(table);
  return kExitOk;
}

int cmd_calibrate(const RunConfig& cfg, const CalibrateArgs& args) {
  cobit::CalibrationSpec spec = cfg.calibration.value_or(cobit::CalibrationSpec{});
  if (args.target) spec.target = *args.target;
  if (args.parameter) spec.parameter = cobit::parse_free_parameter(*args.parameter);
  if (args.lo) spec.bounds.lo = *args.lo;
  if (args.hi) spec.bounds.hi = *args.hi;
  if (args.tolerance) spec.tolerance = *args.tolerance;
  if (!cfg.calibration && !args.target) {
    throw UsageError("calibrate: no target (set calibration.target or --target)");
  }

  cobit::RoundConfig rc = cfg.round_config();
  rc.seed = cfg.require_seed();
  rc.elapsed_min = spec.at_elapsed_min;
  const cobit::Calibration cal = cobit::calibrate_to_target(
      spec.target, spec.parameter, spec.bounds, rc, cfg.trials, spec.tolerance);

  Sink sink = open_sink(cfg);
  Table table{{"parameter", "value", "target", "success", "stderr", "trials", "evaluations"}, {}};
  table.add({std::string(cobit::to_string(spec.parameter)), fixed(cal.value, 9),
             fixed(spec.target), fixed(cal.achieved.success.p_hat),
             fixed(cal.achieved.success.std_error), count(cal.achieved.trials),
             std::to_string(cal.evaluations)});
  sink.table(table);
  return kExitOk;
}

int cmd_blindness(const RunConfig& cfg, const BlindnessArgs& args) {
  cobit::AuditOptions opts;
  opts.mode = cfg.mode;
  opts.pad = !args.no_pad;
  opts.copies = cfg.copies;
  opts.n_probes = args.probes;
  // The audit is exact; the seed only picks the probe states.
  opts.seed = cfg.seed.value_or(0);
  const cobit::BlindnessReport rep = cobit::audit_blindness(opts);

  Sink sink = open_sink(cfg);
  sink.stream() << cobit::to_json(rep) << '\n';
  std::cerr << "blindness: " << (rep.all_checks_pass ? "PASS" : "FAIL")
            << " (max trace distance " << rep.max_trace_distance << ")\n";
  return rep.all_checks_pass ? kExitOk : kExitBlindness;
}

int cmd_circuit(const RunConfig& cfg, const CircuitArgs& args) {
  const cobit::BoolCircuit circuit = cobit::load_netlist(args.netlist);
  const cobit::DelegationPlan plan =
      cobit::lower(circuit, {.local_not = args.local_not || cfg.local_not});
  if (args.all_inputs == !args.inputs.empty()) {
    throw UsageError("circuit: give exactly one of --inputs or --all-inputs");
  }
  cobit::RoundConfig rc = cfg.round_config();
  rc.seed = cfg.require_seed();
  const cobit::NandOracle oracle = cobit::in_process_oracle(rc);
  Sink sink = open_sink(cfg);

  if (!args.all_inputs) {
    const cobit::Bits in = parse_assignment(circuit, args.inputs);
    const cobit::Bits got = cobit::evaluate_delegated(plan, in, oracle);
    const cobit::Bits want = cobit::reference_evaluate(circuit, in);
    Table table{{"output", "value", "reference"}, {}};
    for (std::size_t i = 0; i < got.size(); ++i) {
      table.add({circuit.outputs[i], bit(got[i] != 0), bit(want[i] != 0)});
    }
    sink.table(table);
    sink.note("rounds", count(plan.delegated_rounds()));
    sink.note("mismatches", got == want ? "0" : "1");
    return got == want ? kExitOk : kExitMismatch;
  }

  constexpr std::size_t kMaxSweepInputs = 20;
  const std::size_t n = circuit.inputs.size();
  if (n > kMaxSweepInputs) {
    throw UsageError("--all-inputs supports at most " + std::to_string(kMaxSweepInputs) +
                     " inputs, circuit has " + std::to_string(n));
  }
  std::string names;
  for (const auto& s : circuit.inputs) names += (names.empty() ? "" : " ") + s;
  Table table{{"inputs", "outputs", "reference", "match"}, {}};
  std::uint64_t mismatches = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    cobit::Bits in(n);
    // First declared input is the most significant bit of the row index.
    for (std::size_t i = 0; i < n; ++i) in[i] = (x >> (n - 1 - i)) & 1U;
    const cobit::Bits got = cobit::evaluate_delegated(plan, in, oracle);
    const cobit::Bits want = cobit::reference_evaluate(circuit, in);
    if (got != want) ++mismatches;
    table.add({bit_string(in), bit_string(got), bit_string(want), got == want ? "1" : "0"});
  }
  sink.table(table);
  sink.note("input_order", names);
  sink.note("assignments", count(std::uint64_t{1} << n));
  sink.note("rounds_per_evaluation", count(plan.delegated_rounds()));
  sink.note("local_xors", count(plan.local_xors()));
  sink.note("mismatches", count(mismatches));
  return mismatches == 0 ? kExitOk : kExitMismatch;
}

int cmd_serve(const RunConfig& cfg, const ServeArgs& args) {
  cobit::net::ServerConfig sc;
  sc.n_copies = cfg.copies;
  sc.source = cfg.source;
  sc.noise = cfg.noise;
  sc.seed = cfg.require_seed();
  sc.elapsed_min = cfg.elapsed_min;
  sc.timeout = cfg.timeout;
  sc.delay = cfg.delay;
  const cobit::net::Endpoint where = cobit::net::Endpoint::parse(args.listen);
  Sink sink = open_sink(cfg);

  // SIGINT/SIGTERM end the accept loop so the round log still gets written.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  cobit::net::Server server(sc);
  const std::uint16_t port = server.listen(where);
  std::cout << "listening " << where.host << ":" << port << std::endl;

  std::atomic<bool> done{false};
  std::jthread watcher([&] {
    const timespec slice{0, 100'000'000};
    while (!done.load()) {
      if (sigtimedwait(&stop_signals, nullptr, &slice) > 0) {
        server.request_stop();
        return;
      }
    }
  });
  server.serve(args.max_sessions);
  done.store(true);
  watcher.join();
  server.shutdown();

  auto log = server.round_log();
  std::sort(log.begin(), log.end(), [](const auto& x, const auto& y) {
    return std::tie(x.session, x.round) < std::tie(y.session, y.round);
  });
  std::uint64_t inconclusive = 0;
  for (const auto& e : log) inconclusive += e.s ? 0 : 1;
  if (!cfg.output.empty()) {
    Table table{{"session", "round", "copies", "s", "zeros", "ones"}, {}};
    for (const auto& e : log) {
      table.add({count(e.session), count(e.round), count(e.n_copies), outcome(e.s),
                 count(e.clicks.zeros), count(e.clicks.ones)});
    }
    sink.table(table);
  }
  const cobit::EstimateWithError frac = cobit::poisson_estimate(inconclusive, log.size());
  std::cerr << "sessions: " << server.sessions_accepted() << "\n"
            << "rounds: " << log.size() << "\n"
            << "inconclusive_fraction: " << fixed(frac.p_hat) << " +- "
            << fixed(frac.std_error) << "\n"
            << "violations: " << server.violations() << "\n";
  return kExitOk;
}

int cmd_connect(const RunConfig& cfg, const ConnectArgs& args) {
  if (args.endpoint.empty()) throw UsageError("connect: --endpoint is required");
  if (args.a.has_value() != args.b.has_value()) {
    throw UsageError("connect: give both --a and --b, or neither for uniform inputs");
  }
  cobit::net::ClientConfig cc;
  cc.mode = cfg.mode;
  cc.noise = cfg.noise;
  cc.seed = cfg.require_seed();
  cc.timeout = cfg.timeout;
  cc.delay = cfg.delay;
  const cobit::net::Endpoint ep = cobit::net::Endpoint::parse(args.endpoint);
  Sink sink = open_sink(cfg);

  cobit::net::ClientSession session(ep, cc);
  Table table{{"round", "a", "b", "decoded", "expected", "cause"}, {}};
  std::uint64_t conclusive = 0, correct = 0, done = 0;
  int rc = kExitOk;
  std::string failure;
  for (std::uint64_t i = 0; i < args.rounds; ++i) {
    auto [a, b] = uniform_inputs(cc.seed, i);
    if (args.a) std::tie(a, b) = std::pair{*args.a != 0, *args.b != 0};
    cobit::net::NetRoundResult res;
    try {
      res = session.run_round(a, b);
    } catch (const cobit::net::NetError& e) {
      failure = e.what();
      rc = kExitProtocol;
      break;
    }
    ++done;
    const bool want = cobit::nand(a, b);
    if (res.result.decoded) {
      ++conclusive;
      if (*res.result.decoded == want) ++correct;
    }
    table.add({count(i), bit(a), bit(b),
               res.result.decoded ? bit(*res.result.decoded) : "inconclusive", bit(want),
               std::string(cobit::net::to_string(res.cause))});
    if (!session.open()) {
      failure = "session ended: " + std::string(cobit::net::to_string(res.cause));
      rc = kExitProtocol;
      break;
    }
  }
  session.close();
  sink.table(table);
  const cobit::EstimateWithError acc = cobit::poisson_estimate(correct, conclusive);
  const cobit::EstimateWithError inc = cobit::poisson_estimate(done - conclusive, done);
  sink.note("rounds", count(done));
  sink.note("conclusive", count(conclusive));
  sink.note("correct", count(correct));
  sink.note("success", fixed(acc.p_hat) + " +- " + fixed(acc.std_error));
  sink.note("inconclusive_fraction", fixed(inc.p_hat) + " +- " + fixed(inc.std_error));
  if (!failure.empty()) std::cerr << "error: " << failure << "\n";
  return rc;
}

}  // namespace cobitctl
