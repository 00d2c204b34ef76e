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

// Framed binary wire format between the client and server processes.
//
//   frame   := magic "CBD1" | msg_type u8 | payload_len u32 (big-endian) | payload
//   HELLO       (1)  version u8
//   PREPARE     (2)  n_copies u16 BE, n_copies x (re0, im0, re1, im1) f64 BE
//   TRANSFORMED (3)  same layout as PREPARE
//   RESULT      (4)  s u8 in {0, 1, 255 = inconclusive}
//   CLOSE       (5)  empty
//   ERRORMSG    (6)  code u8, UTF-8 text
//
// payload_len never exceeds 2^20.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cobit/state.hpp"

namespace cobit::wire {

inline constexpr std::array<std::uint8_t, 4> kMagic{'C', 'B', 'D', '1'};
inline constexpr std::size_t kHeaderSize = 9;
inline constexpr std::uint32_t kMaxPayload = 1U << 20;
inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::uint8_t kInconclusive = 255;
/// Amplitudes on the wire must be normalized to this tolerance.
inline constexpr double kTransportTol = 1e-9;

enum class MsgType : std::uint8_t {
  kHello = 1,
  kPrepare = 2,
  kTransformed = 3,
  kResult = 4,
  kClose = 5,
  kError = 6,
};

/// Error codes carried in ERRORMSG.
enum class ErrorCode : std::uint8_t {
  kProtocolViolation = 1,
  kVersionMismatch = 2,
  kMalformedFrame = 3,
  kInternal = 4,
};

/// Raw amplitudes as they travel; kept unnormalized so decode(encode(m)) == m
/// holds bit for bit.
struct WireState {
  Complex amp0;
  Complex amp1;

  static WireState from(const CobitState& s) { return {s.amp0(), s.amp1()}; }
  /// Throws std::invalid_argument if not finite or not normalized.
  CobitState to_state() const;

  friend bool operator==(const WireState&, const WireState&) = default;
};

struct Hello {
  std::uint8_t version = kProtocolVersion;
  friend bool operator==(const Hello&, const Hello&) = default;
};
struct Prepare {
  std::vector<WireState> states;
  friend bool operator==(const Prepare&, const Prepare&) = default;
};
struct Transformed {
  std::vector<WireState> states;
  friend bool operator==(const Transformed&, const Transformed&) = default;
};
struct Result {
  /// 0, 1 or kInconclusive.
  std::uint8_t s = kInconclusive;
  friend bool operator==(const Result&, const Result&) = default;
};
struct Close {
  friend bool operator==(const Close&, const Close&) = default;
};
struct ErrorMsg {
  ErrorCode code = ErrorCode::kProtocolViolation;
  std::string text;
  friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;
};

/// Phase-canonical amplitudes rounded to a 2^-36 grid. Different operator
/// products leave different rounding residue on the same physical state;
/// the grid erases it before anything is sent.
WireState transport_state(const CobitState& s);

using Message = std::variant<Hello, Prepare, Transformed, Result, Close, ErrorMsg>;

MsgType type_of(const Message& msg);
std::string_view to_string(MsgType type);

/// Decoder rejection reasons; each is distinct.
enum class DecodeErrc : std::uint8_t {
  kBadMagic = 1,
  kUnknownType,
  kTruncated,
  kLengthMismatch,
  kPayloadTooLarge,
  kBadPayload,
};

std::string_view to_string(DecodeErrc code);

class WireError : public std::runtime_error {
 public:
  WireError(DecodeErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  DecodeErrc code() const { return code_; }

 private:
  DecodeErrc code_;
};

/// Throws WireError{kPayloadTooLarge} when the payload would exceed 2^20.
std::vector<std::uint8_t> encode_frame(const Message& msg);

/// Decodes exactly one frame occupying all of `bytes`.
Message decode_frame(std::span<const std::uint8_t> bytes);

struct FrameHeader {
  MsgType type = MsgType::kHello;
  std::uint32_t payload_len = 0;
};

/// Validates magic, type and length bound of the 9-byte header.
FrameHeader decode_header(std::span<const std::uint8_t> header);

/// Decodes a payload whose header has already been validated.
Message decode_payload(MsgType type, std::span<const std::uint8_t> payload);

/// Splits a recorded byte stream into frames; throws on the first bad frame.
/// A trailing partial frame raises kTruncated.
std::vector<Message> split_stream(std::span<const std::uint8_t> bytes);

}  // namespace cobit::wire
