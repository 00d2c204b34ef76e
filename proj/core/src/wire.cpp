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

#include "cobit/wire.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace cobit::wire {
namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(bits >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b) {
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
         std::uint32_t{b[3]};
}

double get_f64(std::span<const std::uint8_t> b) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < 8; ++i) bits = (bits << 8) | b[i];
  return std::bit_cast<double>(bits);
}

constexpr std::size_t kStateBytes = 32;

void encode_states(std::vector<std::uint8_t>& out, const std::vector<WireState>& states) {
  if (states.size() > 0xFFFF) {
    throw WireError(DecodeErrc::kPayloadTooLarge, "more than 65535 states");
  }
  put_u16(out, static_cast<std::uint16_t>(states.size()));
  for (const auto& s : states) {
    put_f64(out, s.amp0.real());
    put_f64(out, s.amp0.imag());
    put_f64(out, s.amp1.real());
    put_f64(out, s.amp1.imag());
  }
}

std::vector<WireState> decode_states(std::span<const std::uint8_t> p) {
  if (p.size() < 2) throw WireError(DecodeErrc::kLengthMismatch, "state payload shorter than count");
  const std::size_t n = (std::size_t{p[0]} << 8) | p[1];
  if (p.size() != 2 + n * kStateBytes) {
    throw WireError(DecodeErrc::kLengthMismatch, "state count does not match payload length");
  }
  std::vector<WireState> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = p.subspan(2 + i * kStateBytes, kStateBytes);
    WireState ws{{get_f64(s.subspan(0)), get_f64(s.subspan(8))},
                 {get_f64(s.subspan(16)), get_f64(s.subspan(24))}};
    const double norm2 = std::norm(ws.amp0) + std::norm(ws.amp1);
    if (!std::isfinite(norm2) || std::abs(std::sqrt(norm2) - 1.0) > kTransportTol) {
      throw WireError(DecodeErrc::kBadPayload, "state " + std::to_string(i) + " is not normalized");
    }
    states.push_back(ws);
  }
  return states;
}

bool valid_utf8(std::span<const std::uint8_t> s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const std::uint8_t c = s[i];
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

}  // namespace

CobitState WireState::to_state() const { return CobitState::normalized(amp0, amp1); }

WireState transport_state(const CobitState& s) {
  constexpr double kGrid = 0x1p36;
  // Adding +0.0 also folds -0.0 into +0.0.
  auto round = [](double v) { return std::nearbyint(v * kGrid) / kGrid + 0.0; };
  auto snap = [&](Complex z) { return Complex(round(z.real()), round(z.imag())); };
  const CobitState c = s.canonical_phase();
  return {snap(c.amp0()), snap(c.amp1())};
}

MsgType type_of(const Message& msg) {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) return MsgType::kHello;
        if constexpr (std::is_same_v<T, Prepare>) return MsgType::kPrepare;
        if constexpr (std::is_same_v<T, Transformed>) return MsgType::kTransformed;
        if constexpr (std::is_same_v<T, Result>) return MsgType::kResult;
        if constexpr (std::is_same_v<T, Close>) return MsgType::kClose;
        if constexpr (std::is_same_v<T, ErrorMsg>) return MsgType::kError;
      },
      msg);
}

std::string_view to_string(MsgType type) {
  switch (type) {
    case MsgType::kHello: return "HELLO";
    case MsgType::kPrepare: return "PREPARE";
    case MsgType::kTransformed: return "TRANSFORMED";
    case MsgType::kResult: return "RESULT";
    case MsgType::kClose: return "CLOSE";
    case MsgType::kError: return "ERRORMSG";
  }
  return "UNKNOWN";
}

std::string_view to_string(DecodeErrc code) {
  switch (code) {
    case DecodeErrc::kBadMagic: return "BAD_MAGIC";
    case DecodeErrc::kUnknownType: return "UNKNOWN_TYPE";
    case DecodeErrc::kTruncated: return "TRUNCATED";
    case DecodeErrc::kLengthMismatch: return "LENGTH_MISMATCH";
    case DecodeErrc::kPayloadTooLarge: return "PAYLOAD_TOO_LARGE";
    case DecodeErrc::kBadPayload: return "BAD_PAYLOAD";
  }
  return "UNKNOWN";
}

std::vector<std::uint8_t> encode_frame(const Message& msg) {
  std::vector<std::uint8_t> payload;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Hello>) {
          payload.push_back(m.version);
        } else if constexpr (std::is_same_v<T, Prepare> || std::is_same_v<T, Transformed>) {
          encode_states(payload, m.states);
        } else if constexpr (std::is_same_v<T, Result>) {
          payload.push_back(m.s);
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          payload.push_back(static_cast<std::uint8_t>(m.code));
          payload.insert(payload.end(), m.text.begin(), m.text.end());
        }
      },
      msg);
  if (payload.size() > kMaxPayload) {
    throw WireError(DecodeErrc::kPayloadTooLarge,
                    "payload of " + std::to_string(payload.size()) + " bytes exceeds 2^20");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + payload.size());
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(static_cast<std::uint8_t>(type_of(msg)));
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

FrameHeader decode_header(std::span<const std::uint8_t> header) {
  if (header.size() < kHeaderSize) throw WireError(DecodeErrc::kTruncated, "short header");
  if (!std::equal(kMagic.begin(), kMagic.end(), header.begin())) {
    throw WireError(DecodeErrc::kBadMagic, "frame does not start with CBD1");
  }
  const std::uint8_t type = header[4];
  if (type < 1 || type > 6) {
    throw WireError(DecodeErrc::kUnknownType, "message type " + std::to_string(type));
  }
  const std::uint32_t len = get_u32(header.subspan(5, 4));
  if (len > kMaxPayload) {
    throw WireError(DecodeErrc::kPayloadTooLarge, "declared payload " + std::to_string(len));
  }
  return {static_cast<MsgType>(type), len};
}

Message decode_payload(MsgType type, std::span<const std::uint8_t> p) {
  auto require_size = [&](std::size_t n) {
    if (p.size() != n) {
      throw WireError(DecodeErrc::kLengthMismatch,
                      std::string(to_string(type)) + " payload must be " + std::to_string(n) +
                          " bytes");
    }
  };
  switch (type) {
    case MsgType::kHello:
      require_size(1);
      return Hello{p[0]};
    case MsgType::kPrepare:
      return Prepare{decode_states(p)};
    case MsgType::kTransformed:
      return Transformed{decode_states(p)};
    case MsgType::kResult:
      require_size(1);
      if (p[0] != 0 && p[0] != 1 && p[0] != kInconclusive) {
        throw WireError(DecodeErrc::kBadPayload, "RESULT value " + std::to_string(p[0]));
      }
      return Result{p[0]};
    case MsgType::kClose:
      require_size(0);
      return Close{};
    case MsgType::kError: {
      if (p.empty()) throw WireError(DecodeErrc::kLengthMismatch, "ERRORMSG without code");
      const auto text = p.subspan(1);
      if (!valid_utf8(text)) throw WireError(DecodeErrc::kBadPayload, "ERRORMSG text is not UTF-8");
      return ErrorMsg{static_cast<ErrorCode>(p[0]), std::string(text.begin(), text.end())};
    }
  }
  throw WireError(DecodeErrc::kUnknownType, "unreachable message type");
}

Message decode_frame(std::span<const std::uint8_t> bytes) {
  const FrameHeader h = decode_header(bytes);
  const std::size_t available = bytes.size() - kHeaderSize;
  if (available < h.payload_len) {
    throw WireError(DecodeErrc::kTruncated, "payload_len " + std::to_string(h.payload_len) +
                                                " exceeds the " + std::to_string(available) +
                                                " remaining bytes");
  }
  if (available > h.payload_len) {
    throw WireError(DecodeErrc::kLengthMismatch, "trailing bytes after payload");
  }
  return decode_payload(h.type, bytes.subspan(kHeaderSize));
}

std::vector<Message> split_stream(std::span<const std::uint8_t> bytes) {
  std::vector<Message> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto rest = bytes.subspan(pos);
    const FrameHeader h = decode_header(rest);
    if (rest.size() - kHeaderSize < h.payload_len) {
      throw WireError(DecodeErrc::kTruncated, "stream ends inside a frame");
    }
    out.push_back(decode_payload(h.type, rest.subspan(kHeaderSize, h.payload_len)));
    pos += kHeaderSize + h.payload_len;
  }
  return out;
}

}  // namespace cobit::wire
