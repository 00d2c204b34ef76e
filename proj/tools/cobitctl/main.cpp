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

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cobit/circuit.hpp"
#include "cobit/config.hpp"
#include "cobit/net.hpp"
#include "cobit/photostat.hpp"
#include "cobit/wire.hpp"
#include "commands.hpp"

namespace {

using namespace cobitctl;

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "root seed (required by stochastic commands)");
  cmd->add_option("--mode", f.mode, "abstract or plates")
      ->check(CLI::IsMember({"abstract", "plates"}));
  cmd->add_option("--copies", f.copies, "cobit copies per round");
  cmd->add_option("--trials", f.trials, "Monte Carlo trials (per cell or point)");
  cmd->add_option("--out", f.out, "output file (default stdout)");
  cmd->add_option("--format", f.format, "csv or txt")->check(CLI::IsMember({"csv", "txt"}));
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "error: " << kind << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delegated NAND over cobits: simulation, audits and networked roles", "cobitctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cobitctl 1.0.0");

  CommonFlags flags;
  RoundArgs round_args;
  CalibrateArgs cal_args;
  BlindnessArgs blind_args;
  CircuitArgs circuit_args;
  ServeArgs serve_args;
  ConnectArgs connect_args;

  auto* round = app.add_subcommand("round", "run one delegated round in process");
  add_common(round, flags);
  round->add_option("--a", round_args.a, "client input a")->required();
  round->add_option("--b", round_args.b, "client input b")->required();

  auto* truth = app.add_subcommand("truth-table", "success per (a,b) and pad bit r");
  add_common(truth, flags);

  auto* stability = app.add_subcommand("stability", "success over simulated elapsed time");
  add_common(stability, flags);

  auto* calibrate = app.add_subcommand("calibrate", "fit one noise parameter to a target");
  add_common(calibrate, flags);
  calibrate->add_option("--target", cal_args.target, "target mean success");
  calibrate->add_option("--parameter", cal_args.parameter, "parameter to fit")
      ->check(CLI::IsMember({"plate_jitter_sigma", "drift_sigma_round", "drift_slope_per_min"}));
  calibrate->add_option("--lo", cal_args.lo, "lower search bound");
  calibrate->add_option("--hi", cal_args.hi, "upper search bound");
  calibrate->add_option("--tolerance", cal_args.tolerance, "stop when this close to target");

  auto* blindness = app.add_subcommand("blindness", "exact blindness audit (JSON report)");
  add_common(blindness, flags);
  blindness->add_flag("--no-pad", blind_args.no_pad, "negative control: disable the pad");
  blindness->add_option("--probes", blind_args.probes, "random server probe states");

  auto* circuit = app.add_subcommand("circuit", "evaluate a netlist through delegated rounds");
  add_common(circuit, flags);
  circuit->add_option("netlist", circuit_args.netlist, "netlist file")->required();
  circuit->add_option("--inputs", circuit_args.inputs, "bit string in INPUT order, or a=1,b=0");
  circuit->add_flag("--all-inputs", circuit_args.all_inputs, "sweep and diff against reference");
  circuit->add_flag("--local-not", circuit_args.local_not, "evaluate NOT locally as XOR with 1");

  auto* serve = app.add_subcommand("serve", "run the server role");
  add_common(serve, flags);
  serve->add_option("--listen", serve_args.listen, "host:port (port 0 picks a free one)");
  serve->add_option("--max-sessions", serve_args.max_sessions, "exit after this many sessions");

  auto* connect = app.add_subcommand("connect", "run the client role against a server");
  add_common(connect, flags);
  connect->add_option("--endpoint", connect_args.endpoint, "server host:port")->required();
  connect->add_option("--rounds", connect_args.rounds, "rounds to run");
  connect->add_option("--a", connect_args.a, "fixed input a (default uniform)")
      ->check(CLI::Range(0, 1));
  connect->add_option("--b", connect_args.b, "fixed input b (default uniform)")
      ->check(CLI::Range(0, 1));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const cobit::RunConfig cfg = resolve_config(flags);
    if (*round) return cmd_round(cfg, round_args);
    if (*truth) return cmd_truth_table(cfg);
    if (*stability) return cmd_stability(cfg);
    if (*calibrate) return cmd_calibrate(cfg, cal_args);
    if (*blindness) return cmd_blindness(cfg, blind_args);
    if (*circuit) return cmd_circuit(cfg, circuit_args);
    if (*serve) return cmd_serve(cfg, serve_args);
    if (*connect) return cmd_connect(cfg, connect_args);
  } catch (const cobit::CircuitError& e) {
    return report("", e, kExitConfig);
  } catch (const cobit::EvaluationError& e) {
    return report("evaluation: ", e, kExitProtocol);
  } catch (const cobit::net::NetError& e) {
    return report("", e, kExitProtocol);
  } catch (const cobit::wire::WireError& e) {
    return report("wire: ", e, kExitProtocol);
  } catch (const cobit::ConfigError& e) {
    return report("config: ", e, kExitConfig);
  } catch (const cobit::CalibrationError& e) {
    return report("calibration: ", e, kExitConfig);
  } catch (const UsageError& e) {
    return report("", e, kExitConfig);
  } catch (const std::invalid_argument& e) {
    return report("", e, kExitConfig);
  } catch (const std::exception& e) {
    return report("internal: ", e, kExitInternal);
  }
  return kExitInternal;
}
