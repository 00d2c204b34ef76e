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

// Session layer over TCP: the server and client roles as separate processes,
// plus a passive recording relay used to audit what crosses the wire.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "cobit/noise.hpp"
#include "cobit/protocol.hpp"
#include "cobit/security.hpp"
#include "cobit/wire.hpp"

namespace cobit::net {

using Millis = std::chrono::milliseconds;

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "host:port"; throws std::invalid_argument.
  static Endpoint parse(std::string_view text);
  std::string str() const { return host + ":" + std::to_string(port); }
};

enum class NetErrc : std::uint8_t {
  kConnect,
  kTimeout,
  kConnectionLost,
  kProtocolViolation,
  kVersionMismatch,
  kRemoteError,
};

std::string_view to_string(NetErrc code);

class NetError : public std::runtime_error {
 public:
  NetError(NetErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  NetErrc code() const { return code_; }

 private:
  NetErrc code_;
};

/// Owning TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  static Socket connect_to(const Endpoint& endpoint);
  static Socket listen_on(const Endpoint& endpoint, int backlog = 64);

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close();
  /// Wakes any thread blocked on this socket.
  void shutdown_both();
  std::uint16_t local_port() const;

  /// nullopt when nothing arrived within `wait`.
  std::optional<Socket> accept(Millis wait);
  void send_all(std::span<const std::uint8_t> bytes);
  /// Fills `buf` completely before `deadline`; polls `stop` between slices.
  void recv_exact(std::span<std::uint8_t> buf, std::chrono::steady_clock::time_point deadline,
                  const std::atomic<bool>* stop = nullptr);

 private:
  int fd_ = -1;
};

void send_message(Socket& socket, const wire::Message& msg);
/// Reads one frame. Throws NetError on timeout / EOF and wire::WireError on
/// malformed frames.
wire::Message recv_message(Socket& socket, Millis timeout,
                           const std::atomic<bool>* stop = nullptr);

enum class Role : std::uint8_t { kClient, kServer };
enum class SessionState : std::uint8_t { kIdle, kAwaitingTransform, kAwaitingResult, kClosed };

std::string_view to_string(SessionState state);

/// Legal transitions, server side:
///   idle --recv HELLO, send PREPARE--> awaiting_transform
///   awaiting_transform --recv TRANSFORMED, send RESULT--> idle
/// Client side:
///   idle --send HELLO, recv PREPARE, send TRANSFORMED--> awaiting_result
///   awaiting_result --recv RESULT--> idle
/// CLOSE and ERRORMSG close the session from any state.
class Session {
 public:
  explicit Session(Role role) : role_(role) {}

  Role role() const { return role_; }
  SessionState state() const { return state_; }
  std::uint64_t rounds() const { return rounds_; }

  /// Throw NetError{kProtocolViolation} on an illegal transition.
  void on_send(wire::MsgType type);
  void on_recv(wire::MsgType type);

 private:
  [[noreturn]] void violation(std::string_view dir, wire::MsgType type) const;

  Role role_;
  SessionState state_ = SessionState::kIdle;
  // Next step owed by this side within a round.
  bool pending_ = false;
  std::uint64_t rounds_ = 0;
};

struct ServerConfig {
  std::size_t n_copies = 1;
  SourceModel source;
  NoiseModel noise;
  std::uint64_t seed = 0;
  double elapsed_min = 0.0;
  Millis timeout{5000};
  /// Simulated propagation delay before each state-carrying send.
  Millis delay{0};
};

struct ServerRoundLog {
  std::uint64_t session = 0;
  std::uint64_t round = 0;
  std::size_t n_copies = 0;
  Outcome s;
  ClickCounts clicks;
};

/// Multi-session server. Each session runs on its own thread with a private
/// random source; nothing mutable is shared between sessions except the
/// append-only round log.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and returns the bound port (useful with port 0).
  std::uint16_t listen(const Endpoint& endpoint);
  /// Accepts until shutdown() or until `max_sessions` sessions have finished.
  void serve(std::optional<std::uint64_t> max_sessions = std::nullopt);
  void start();
  void shutdown();
  // Async-safe: makes serve() return at its next poll slice.
  void request_stop() { stop_.store(true); }

  std::vector<ServerRoundLog> round_log() const;
  std::uint64_t sessions_accepted() const { return sessions_.load(); }
  std::uint64_t violations() const { return violations_.load(); }

 private:
  void handle_session(Socket socket, std::uint64_t session_id);

  ServerConfig config_;
  Socket listener_;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> sessions_{0};
  std::atomic<std::uint64_t> finished_{0};
  std::atomic<std::uint64_t> violations_{0};
  std::thread accept_thread_;
  mutable std::mutex mu_;
  std::vector<std::jthread> workers_;
  std::vector<int> live_fds_;
  std::vector<ServerRoundLog> log_;
};

/// Binds `endpoint` and serves on the calling thread; returns only if the
/// server is shut down from elsewhere.
void run_server(const Endpoint& endpoint, const ServerConfig& config);

struct ClientConfig {
  Mode mode = Mode::kPlates;
  /// Only plate_jitter_sigma is used on the client side.
  NoiseModel noise;
  std::uint64_t seed = 0;
  std::optional<bool> forced_pad;
  Millis timeout{5000};
  Millis delay{0};
  std::uint8_t version = wire::kProtocolVersion;
};

enum class InconclusiveCause : std::uint8_t { kNone, kNoDetection, kTimeout, kConnectionLost };

std::string_view to_string(InconclusiveCause cause);

struct NetRoundResult {
  RoundResult result;
  InconclusiveCause cause = InconclusiveCause::kNone;
};

/// One connection, many sequential rounds. The pad never leaves this object.
class ClientSession {
 public:
  /// Throws NetError{kConnect}.
  ClientSession(const Endpoint& endpoint, ClientConfig config);
  ~ClientSession();
  ClientSession(const ClientSession&) = delete;
  ClientSession& operator=(const ClientSession&) = delete;

  /// HELLO, PREPARE, plate program, TRANSFORMED, RESULT, decode. Timeouts and
  /// a vanished server end the round as inconclusive; a version mismatch or a
  /// protocol error from the server throws NetError.
  NetRoundResult run_round(bool a, bool b);
  void close();
  bool open() const { return socket_.valid() && session_.state() != SessionState::kClosed; }

 private:
  Socket socket_;
  ClientConfig config_;
  Session session_{Role::kClient};
};

NetRoundResult run_client(const Endpoint& endpoint, bool a, bool b, const ClientConfig& config);

/// Byte-level man in the middle: forwards traffic unchanged and records both
/// directions of every connection.
class RecordingRelay {
 public:
  struct Capture {
    std::vector<std::uint8_t> client_to_server;
    std::vector<std::uint8_t> server_to_client;
  };

  explicit RecordingRelay(Endpoint upstream);
  ~RecordingRelay();
  RecordingRelay(const RecordingRelay&) = delete;
  RecordingRelay& operator=(const RecordingRelay&) = delete;

  std::uint16_t listen(const Endpoint& endpoint);
  void start();
  void stop();
  std::vector<Capture> captures() const;

 private:
  void pump(Socket downstream, std::size_t index);

  Endpoint upstream_;
  Socket listener_;
  std::atomic<bool> stop_{false};
  std::thread accept_thread_;
  mutable std::mutex mu_;
  std::vector<std::jthread> pumps_;
  std::vector<Capture> captures_;
};

/// Observations a passive wire recorder can extract, one per completed round.
std::vector<ServerObservation> observations_from_capture(const RecordingRelay::Capture& capture);

}  // namespace cobit::net
