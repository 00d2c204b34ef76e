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

#include <gtest/gtest.h>

#include <bit>
#include <cstring>

#include "cobit/wire.hpp"
#include "wire_fuzz.hpp"

namespace cobit::wire {
namespace {

using Bytes = std::vector<std::uint8_t>;

Bytes header(std::uint8_t type, std::uint32_t len) {
  return {0x43, 0x42, 0x44, 0x31, type, std::uint8_t(len >> 24), std::uint8_t(len >> 16),
          std::uint8_t(len >> 8), std::uint8_t(len)};
}

void put_f64(Bytes& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(std::uint8_t(bits >> shift));
}

DecodeErrc decode_error(const Bytes& bytes) {
  try {
    decode_frame(bytes);
  } catch (const WireError& e) {
    return e.code();
  }
  ADD_FAILURE() << "frame was accepted";
  return DecodeErrc::kBadMagic;
}

TEST(EncodeFrame, ExactLayouts) {
  Bytes result = header(0x04, 1);
  result.push_back(0x01);
  EXPECT_EQ(encode_frame(Result{1}), result);
  EXPECT_EQ(encode_frame(Close{}), header(0x05, 0));
  Bytes hello = header(0x01, 1);
  hello.push_back(0x01);
  EXPECT_EQ(encode_frame(Hello{1}), hello);
}

TEST(EncodeFrame, StateLayout) {
  const WireState s{{0.6, 0.0}, {0.0, -0.8}};
  Bytes want = header(0x02, 2 + 32);
  want.push_back(0x00);
  want.push_back(0x01);
  for (double v : {0.6, 0.0, 0.0, -0.8}) put_f64(want, v);
  EXPECT_EQ(encode_frame(Prepare{{s}}), want);
  want[4] = 0x03;
  EXPECT_EQ(encode_frame(Transformed{{s}}), want);
}

TEST(EncodeFrame, ErrorMsgLayout) {
  Bytes want = header(0x06, 3);
  want.insert(want.end(), {0x01, 'h', 'i'});
  EXPECT_EQ(encode_frame(ErrorMsg{ErrorCode::kProtocolViolation, "hi"}), want);
}

TEST(EncodeFrame, PayloadTooLarge) {
  // 2 + 32 n > 2^20 once n > 32767.
  Prepare big{std::vector<WireState>(32768, WireState{{1, 0}, {0, 0}})};
  try {
    encode_frame(big);
    FAIL();
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), DecodeErrc::kPayloadTooLarge);
  }
  Prepare ok{std::vector<WireState>(32767, WireState{{1, 0}, {0, 0}})};
  EXPECT_EQ(encode_frame(ok).size(), kHeaderSize + 2 + 32 * 32767U);
}

TEST(DecodeFrame, RoundTripEveryKind) {
  const std::vector<Message> all{Hello{1},
                                 Prepare{{WireState{{1, 0}, {0, 0}}}},
                                 Transformed{{WireState{{0, 0}, {0, 1}}, WireState{{0.6, 0}, {0.8, 0}}}},
                                 Result{0},
                                 Result{1},
                                 Result{kInconclusive},
                                 Close{},
                                 ErrorMsg{ErrorCode::kVersionMismatch, "version 2 \xe2\x82\xac"}};
  for (const auto& m : all) EXPECT_EQ(decode_frame(encode_frame(m)), m);
}

TEST(DecodeFrame, DistinctRejections) {
  Bytes bad_magic = encode_frame(Close{});
  bad_magic[0] = 'X';
  EXPECT_EQ(decode_error(bad_magic), DecodeErrc::kBadMagic);

  Bytes unknown = header(0x07, 0);
  EXPECT_EQ(decode_error(unknown), DecodeErrc::kUnknownType);
  EXPECT_EQ(decode_error(header(0x00, 0)), DecodeErrc::kUnknownType);

  Bytes truncated = encode_frame(Result{1});
  truncated.pop_back();
  EXPECT_EQ(decode_error(truncated), DecodeErrc::kTruncated);
  EXPECT_EQ(decode_error(Bytes{0x43, 0x42}), DecodeErrc::kTruncated);

  Bytes trailing = encode_frame(Result{1});
  trailing.push_back(0);
  EXPECT_EQ(decode_error(trailing), DecodeErrc::kLengthMismatch);

  EXPECT_EQ(decode_error(header(0x02, (1U << 20) + 1)), DecodeErrc::kPayloadTooLarge);

  Bytes bad_result = header(0x04, 1);
  bad_result.push_back(7);
  EXPECT_EQ(decode_error(bad_result), DecodeErrc::kBadPayload);

  Bytes wrong_count = header(0x02, 2 + 32);
  wrong_count.insert(wrong_count.end(), {0x00, 0x02});
  for (double v : {1.0, 0.0, 0.0, 0.0}) put_f64(wrong_count, v);
  EXPECT_EQ(decode_error(wrong_count), DecodeErrc::kLengthMismatch);

  Bytes unnormalized = header(0x03, 2 + 32);
  unnormalized.insert(unnormalized.end(), {0x00, 0x01});
  for (double v : {1.0, 0.0, 1.0, 0.0}) put_f64(unnormalized, v);
  EXPECT_EQ(decode_error(unnormalized), DecodeErrc::kBadPayload);

  Bytes nan_state = header(0x03, 2 + 32);
  nan_state.insert(nan_state.end(), {0x00, 0x01});
  for (double v : {std::nan(""), 0.0, 0.0, 0.0}) put_f64(nan_state, v);
  EXPECT_EQ(decode_error(nan_state), DecodeErrc::kBadPayload);

  Bytes bad_utf8 = header(0x06, 3);
  bad_utf8.insert(bad_utf8.end(), {0x01, 0xc3, 0x28});
  EXPECT_EQ(decode_error(bad_utf8), DecodeErrc::kBadPayload);
  Bytes cut_utf8 = header(0x06, 2);
  cut_utf8.insert(cut_utf8.end(), {0x01, 0xe2});
  EXPECT_EQ(decode_error(cut_utf8), DecodeErrc::kBadPayload);

  Bytes close_with_body = header(0x05, 1);
  close_with_body.push_back(0);
  EXPECT_EQ(decode_error(close_with_body), DecodeErrc::kLengthMismatch);
}

TEST(DecodeFrame, TransportTolerance) {
  const double eps = 1e-11;
  Bytes near = header(0x03, 2 + 32);
  near.insert(near.end(), {0x00, 0x01});
  for (double v : {1.0 + eps, 0.0, 0.0, 0.0}) put_f64(near, v);
  EXPECT_NO_THROW(decode_frame(near));
}

TEST(TransportState, ErasesResidueAndPhase) {
  const CobitState exact = basis_state(1);
  const CobitState residue = CobitState::normalized({1e-17, -2e-17}, {-1.0, 0.0});
  EXPECT_EQ(transport_state(exact), transport_state(residue));
  EXPECT_EQ(encode_frame(Transformed{{transport_state(exact)}}),
            encode_frame(Transformed{{transport_state(residue.with_global_phase(0.7))}}));
  const auto t = transport_state(CobitState::normalized({-1e-300, 0}, 1));
  EXPECT_FALSE(std::signbit(t.amp0.real()));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const WireState w = testing_support::random_wire_state(rng);
    EXPECT_NO_THROW(transport_state(w.to_state()).to_state());
    EXPECT_TRUE(equal_up_to_global_phase(transport_state(w.to_state()).to_state(), w.to_state(),
                                         1e-9));
  }
}

TEST(SplitStream, FramesAndTrailingPartial) {
  Bytes stream;
  for (const Message& m : std::vector<Message>{Hello{1}, Result{0}, Close{}}) {
    const Bytes f = encode_frame(m);
    stream.insert(stream.end(), f.begin(), f.end());
  }
  EXPECT_EQ(split_stream(stream).size(), 3U);
  stream.push_back(0x43);
  try {
    split_stream(stream);
    FAIL();
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), DecodeErrc::kTruncated);
  }
}

TEST(MessageNames, Stable) {
  EXPECT_EQ(to_string(MsgType::kTransformed), "TRANSFORMED");
  EXPECT_EQ(to_string(DecodeErrc::kTruncated), "TRUNCATED");
  EXPECT_EQ(type_of(Message{ErrorMsg{}}), MsgType::kError);
}

// Properties.

TEST(WireProperties, RoundTripRandomMessages) {
  std::mt19937_64 rng(100);
  for (int i = 0; i < 100'000; ++i) {
    const Message m = testing_support::random_message(rng);
    const Bytes f = encode_frame(m);
    ASSERT_EQ(decode_frame(f), m);
    ASSERT_EQ(encode_frame(decode_frame(f)), f);
  }
}

TEST(WireProperties, EveryTruncationRejected) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 2000; ++i) {
    const Bytes f = encode_frame(testing_support::random_message(rng, 3));
    for (std::size_t cut = 0; cut < f.size(); ++cut) {
      const Bytes prefix(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(cut));
      ASSERT_EQ(decode_error(prefix), DecodeErrc::kTruncated) << cut;
    }
  }
}

TEST(WireProperties, CorruptionNeverCrashes) {
  std::mt19937_64 rng(102);
  int rejected = 0;
  for (int i = 0; i < 20'000; ++i) {
    Bytes f = encode_frame(testing_support::random_message(rng, 3));
    const int flips = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < flips; ++k) f[rng() % f.size()] ^= std::uint8_t(1 + rng() % 255);
    try {
      const Message m = decode_frame(f);
      // Anything accepted must re-encode to the same bytes.
      ASSERT_EQ(encode_frame(m), f);
    } catch (const WireError&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 10'000);
}

}  // namespace
}  // namespace cobit::wire
