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

#include "cobit/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace cobit {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path.empty() ? what : path + ": " + what);
}

void only_keys(const json& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

template <typename T>
void read(const json& obj, const std::string& path, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string where = path.empty() ? key : path + "." + key;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) fail(where, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer() || (std::is_unsigned_v<T> && it->get<std::int64_t>() < 0)) {
        fail(where, "expected a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) fail(where, "expected a number");
    } else {
      if (!it->is_string()) fail(where, "expected a string");
    }
    out = it->get<T>();
  } catch (const json::exception& e) {
    fail(where, e.what());
  }
}

void parse_drift(const json& j, DriftSchedule& d) {
  only_keys(j, "noise.drift", {"offset", "slope_per_min", "sigma_round"});
  read(j, "noise.drift", "offset", d.offset);
  read(j, "noise.drift", "slope_per_min", d.slope_per_min);
  read(j, "noise.drift", "sigma_round", d.sigma_round);
}

void parse_noise(const json& j, NoiseModel& n) {
  only_keys(j, "noise", {"loss_prob", "plate_jitter_sigma", "detector_efficiency",
                         "dark_count_prob", "deadtime_s", "drift"});
  read(j, "noise", "loss_prob", n.loss_prob);
  read(j, "noise", "plate_jitter_sigma", n.plate_jitter_sigma);
  read(j, "noise", "detector_efficiency", n.detector_efficiency);
  read(j, "noise", "dark_count_prob", n.dark_count_prob);
  read(j, "noise", "deadtime_s", n.deadtime_s);
  if (auto it = j.find("drift"); it != j.end()) parse_drift(*it, n.drift);
}

void parse_source(const json& j, SourceModel& s) {
  only_keys(j, "source", {"kind", "rate_hz", "window_s"});
  std::string kind = std::string(to_string(s.kind));
  read(j, "source", "kind", kind);
  try {
    s.kind = parse_source_kind(kind);
  } catch (const std::invalid_argument& e) {
    fail("source.kind", e.what());
  }
  read(j, "source", "rate_hz", s.rate_hz);
  read(j, "source", "window_s", s.window_s);
}

void parse_calibration(const json& j, CalibrationSpec& c) {
  only_keys(j, "calibration", {"target", "parameter", "lo", "hi", "tolerance", "at_elapsed_min"});
  if (!j.contains("target")) fail("calibration.target", "required");
  read(j, "calibration", "target", c.target);
  std::string param = std::string(to_string(c.parameter));
  read(j, "calibration", "parameter", param);
  try {
    c.parameter = parse_free_parameter(param);
  } catch (const std::invalid_argument& e) {
    fail("calibration.parameter", e.what());
  }
  read(j, "calibration", "lo", c.bounds.lo);
  read(j, "calibration", "hi", c.bounds.hi);
  read(j, "calibration", "tolerance", c.tolerance);
  read(j, "calibration", "at_elapsed_min", c.at_elapsed_min);
  if (!(c.target > 0.5 && c.target <= 1.0)) fail("calibration.target", "must lie in (0.5, 1]");
  if (!(c.bounds.lo < c.bounds.hi)) fail("calibration", "lo must be below hi");
  if (!(c.tolerance > 0.0)) fail("calibration.tolerance", "must be positive");
}

}  // namespace

std::string_view to_string(FreeParameter param) {
  switch (param) {
    case FreeParameter::kPlateJitter: return "plate_jitter_sigma";
    case FreeParameter::kDriftSigma: return "drift_sigma_round";
    case FreeParameter::kDriftSlope: return "drift_slope_per_min";
  }
  return "?";
}

FreeParameter parse_free_parameter(std::string_view text) {
  for (auto p : {FreeParameter::kPlateJitter, FreeParameter::kDriftSigma,
                 FreeParameter::kDriftSlope}) {
    if (text == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown free parameter '" + std::string(text) + "'");
}

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kIdeal: return "ideal";
    case SourceKind::kHeralded: return "heralded";
    case SourceKind::kCoherent: return "coherent";
  }
  return "?";
}

SourceKind parse_source_kind(std::string_view text) {
  for (auto k : {SourceKind::kIdeal, SourceKind::kHeralded, SourceKind::kCoherent}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown source kind '" + std::string(text) + "'");
}

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError("seed: required for stochastic runs (set \"seed\" or --seed)");
  return *seed;
}

RoundConfig RunConfig::round_config() const {
  RoundConfig rc;
  rc.mode = mode;
  rc.n_copies = copies;
  rc.source = source;
  rc.noise = noise;
  rc.seed = seed.value_or(0);
  rc.elapsed_min = elapsed_min;
  return rc;
}

RunConfig parse_run_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  only_keys(j, "", {"mode", "copies", "trials", "seed", "source", "noise", "elapsed_min",
                    "protocol", "network", "stability", "calibration", "output"});
  RunConfig c;
  std::string mode = std::string(to_string(c.mode));
  read(j, "", "mode", mode);
  try {
    c.mode = parse_mode(mode);
  } catch (const std::invalid_argument& e) {
    fail("mode", e.what());
  }
  read(j, "", "copies", c.copies);
  read(j, "", "trials", c.trials);
  if (j.contains("seed")) {
    std::uint64_t s = 0;
    read(j, "", "seed", s);
    c.seed = s;
  }
  read(j, "", "elapsed_min", c.elapsed_min);
  if (auto it = j.find("source"); it != j.end()) parse_source(*it, c.source);
  if (auto it = j.find("noise"); it != j.end()) parse_noise(*it, c.noise);
  if (auto it = j.find("protocol"); it != j.end()) {
    only_keys(*it, "protocol", {"local_not"});
    read(*it, "protocol", "local_not", c.local_not);
  }
  if (auto it = j.find("network"); it != j.end()) {
    only_keys(*it, "network", {"timeout_ms", "delay_ms"});
    std::int64_t timeout = c.timeout.count();
    std::int64_t delay = c.delay.count();
    read(*it, "network", "timeout_ms", timeout);
    read(*it, "network", "delay_ms", delay);
    if (timeout <= 0) fail("network.timeout_ms", "must be positive");
    if (delay < 0) fail("network.delay_ms", "must be non-negative");
    c.timeout = std::chrono::milliseconds(timeout);
    c.delay = std::chrono::milliseconds(delay);
  }
  if (auto it = j.find("stability"); it != j.end()) {
    only_keys(*it, "stability", {"duration_min", "points"});
    read(*it, "stability", "duration_min", c.duration_min);
    read(*it, "stability", "points", c.stability_points);
    if (c.stability_points < 2) fail("stability.points", "need at least 2");
  }
  if (auto it = j.find("calibration"); it != j.end()) {
    CalibrationSpec spec;
    parse_calibration(*it, spec);
    c.calibration = spec;
  }
  if (auto it = j.find("output"); it != j.end()) {
    only_keys(*it, "output", {"path", "format"});
    read(*it, "output", "path", c.output);
    read(*it, "output", "format", c.format);
    if (c.format != "csv" && c.format != "txt") fail("output.format", "must be csv or txt");
  }

  if (c.copies == 0) fail("copies", "must be at least 1");
  if (c.trials == 0) fail("trials", "must be at least 1");
  try {
    c.noise.validate();
    c.source.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace cobit
