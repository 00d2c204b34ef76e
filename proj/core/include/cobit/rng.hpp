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

// Seed derivation. Every logical actor (client, channel, server, trial) gets
// its own engine derived from a root seed; engines are never shared.

#pragma once

#include <cstdint>

#include "cobit/state.hpp"

namespace cobit {

enum class Stream : std::uint64_t {
  kClient = 1,
  kChannel = 2,
  kServer = 3,
  kInputs = 4,
  kTrial = 5,
  kSession = 6,
};

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the `index`-th member of `stream` under `root`.
std::uint64_t derive_seed(std::uint64_t root, Stream stream, std::uint64_t index = 0);

Rng make_rng(std::uint64_t root, Stream stream, std::uint64_t index = 0);

}  // namespace cobit
