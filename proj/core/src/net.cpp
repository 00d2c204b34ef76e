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

#include "cobit/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "cobit/rng.hpp"

namespace cobit::net {
namespace {

using Clock = std::chrono::steady_clock;
constexpr Millis kPollSlice{50};

std::string errno_text() { return std::strerror(errno); }

sockaddr_in resolve(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string host = ep.host.empty() ? "127.0.0.1" : ep.host;
  if (const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res); rc != 0) {
    throw NetError(NetErrc::kConnect, "cannot resolve '" + host + "': " + ::gai_strerror(rc));
  }
  sockaddr_in addr{};
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  ::freeaddrinfo(res);
  addr.sin_port = htons(ep.port);
  return addr;
}

void delay_for(Millis d) {
  if (d.count() > 0) std::this_thread::sleep_for(d);
}

std::vector<wire::WireState> to_wire(std::span<const CobitState> states) {
  std::vector<wire::WireState> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(wire::transport_state(s));
  return out;
}

std::vector<CobitState> from_wire(const std::vector<wire::WireState>& states) {
  std::vector<CobitState> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.to_state());
  return out;
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon + 1 >= text.size()) {
    throw std::invalid_argument("endpoint must be host:port, got '" + std::string(text) + "'");
  }
  Endpoint ep;
  ep.host = std::string(text.substr(0, colon));
  const std::string port(text.substr(colon + 1));
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != port.size() || value > 65535) {
    throw std::invalid_argument("bad port in endpoint '" + std::string(text) + "'");
  }
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

std::string_view to_string(NetErrc code) {
  switch (code) {
    case NetErrc::kConnect: return "CONNECT";
    case NetErrc::kTimeout: return "TIMEOUT";
    case NetErrc::kConnectionLost: return "CONNECTION_LOST";
    case NetErrc::kProtocolViolation: return "PROTOCOL_VIOLATION";
    case NetErrc::kVersionMismatch: return "VERSION_MISMATCH";
    case NetErrc::kRemoteError: return "REMOTE_ERROR";
  }
  return "UNKNOWN";
}

std::string_view to_string(SessionState state) {
  switch (state) {
    case SessionState::kIdle: return "idle";
    case SessionState::kAwaitingTransform: return "awaiting_transform";
    case SessionState::kAwaitingResult: return "awaiting_result";
    case SessionState::kClosed: return "closed";
  }
  return "?";
}

std::string_view to_string(InconclusiveCause cause) {
  switch (cause) {
    case InconclusiveCause::kNone: return "none";
    case InconclusiveCause::kNoDetection: return "no_detection";
    case InconclusiveCause::kTimeout: return "timeout";
    case InconclusiveCause::kConnectionLost: return "connection_lost";
  }
  return "?";
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void Socket::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::shutdown_both() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket Socket::connect_to(const Endpoint& endpoint) {
  const sockaddr_in addr = resolve(endpoint);
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) throw NetError(NetErrc::kConnect, "socket(): " + errno_text());
  if (::connect(s.fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw NetError(NetErrc::kConnect, "cannot connect to " + endpoint.str() + ": " + errno_text());
  }
  const int one = 1;
  ::setsockopt(s.fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return s;
}

Socket Socket::listen_on(const Endpoint& endpoint, int backlog) {
  const sockaddr_in addr = resolve(endpoint);
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) throw NetError(NetErrc::kConnect, "socket(): " + errno_text());
  const int one = 1;
  ::setsockopt(s.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(s.fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw NetError(NetErrc::kConnect, "cannot bind " + endpoint.str() + ": " + errno_text());
  }
  if (::listen(s.fd_, backlog) != 0) {
    throw NetError(NetErrc::kConnect, "listen(): " + errno_text());
  }
  return s;
}

std::uint16_t Socket::local_port() const {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) return 0;
  return ntohs(addr.sin_port);
}

std::optional<Socket> Socket::accept(Millis wait) {
  pollfd p{fd_, POLLIN, 0};
  const int rc = ::poll(&p, 1, static_cast<int>(wait.count()));
  if (rc <= 0 || (p.revents & POLLIN) == 0) return std::nullopt;
  const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) return std::nullopt;
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return Socket(fd);
}

void Socket::send_all(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetError(NetErrc::kConnectionLost, "send(): " + errno_text());
    }
    sent += static_cast<std::size_t>(n);
  }
}

void Socket::recv_exact(std::span<std::uint8_t> buf, Clock::time_point deadline,
                        const std::atomic<bool>* stop) {
  std::size_t got = 0;
  while (got < buf.size()) {
    if (stop && stop->load()) throw NetError(NetErrc::kConnectionLost, "shutting down");
    const auto now = Clock::now();
    if (now >= deadline) throw NetError(NetErrc::kTimeout, "no data before the deadline");
    const auto left = std::chrono::duration_cast<Millis>(deadline - now);
    pollfd p{fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(std::min(left, kPollSlice).count()) + 1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw NetError(NetErrc::kConnectionLost, "poll(): " + errno_text());
    }
    if (rc == 0) continue;
    const ssize_t n = ::recv(fd_, buf.data() + got, buf.size() - got, 0);
    if (n == 0) throw NetError(NetErrc::kConnectionLost, "peer closed the connection");
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw NetError(NetErrc::kConnectionLost, "recv(): " + errno_text());
    }
    got += static_cast<std::size_t>(n);
  }
}

void send_message(Socket& socket, const wire::Message& msg) {
  socket.send_all(wire::encode_frame(msg));
}

wire::Message recv_message(Socket& socket, Millis timeout, const std::atomic<bool>* stop) {
  const auto deadline = Clock::now() + timeout;
  std::array<std::uint8_t, wire::kHeaderSize> header{};
  socket.recv_exact(header, deadline, stop);
  const wire::FrameHeader h = wire::decode_header(header);
  std::vector<std::uint8_t> payload(h.payload_len);
  socket.recv_exact(payload, deadline, stop);
  return wire::decode_payload(h.type, payload);
}

void Session::violation(std::string_view dir, wire::MsgType type) const {
  throw NetError(NetErrc::kProtocolViolation,
                 std::string(role_ == Role::kServer ? "server" : "client") + " cannot " +
                     std::string(dir) + " " + std::string(wire::to_string(type)) + " while " +
                     std::string(to_string(state_)));
}

void Session::on_send(wire::MsgType type) {
  using wire::MsgType;
  if (state_ == SessionState::kClosed) violation("send", type);
  if (type == MsgType::kClose || type == MsgType::kError) {
    state_ = SessionState::kClosed;
    return;
  }
  if (role_ == Role::kServer) {
    if (type == MsgType::kPrepare && state_ == SessionState::kIdle && pending_) {
      state_ = SessionState::kAwaitingTransform;
      pending_ = false;
    } else if (type == MsgType::kResult && state_ == SessionState::kAwaitingTransform && pending_) {
      state_ = SessionState::kIdle;
      pending_ = false;
      ++rounds_;
    } else {
      violation("send", type);
    }
  } else {
    if (type == MsgType::kHello && state_ == SessionState::kIdle && !pending_) {
      pending_ = true;
    } else if (type == MsgType::kTransformed && state_ == SessionState::kAwaitingTransform) {
      state_ = SessionState::kAwaitingResult;
    } else {
      violation("send", type);
    }
  }
}

void Session::on_recv(wire::MsgType type) {
  using wire::MsgType;
  if (state_ == SessionState::kClosed) violation("receive", type);
  if (type == MsgType::kClose || type == MsgType::kError) {
    state_ = SessionState::kClosed;
    return;
  }
  if (role_ == Role::kServer) {
    if (type == MsgType::kHello && state_ == SessionState::kIdle && !pending_) {
      pending_ = true;
    } else if (type == MsgType::kTransformed && state_ == SessionState::kAwaitingTransform &&
               !pending_) {
      pending_ = true;
    } else {
      violation("receive", type);
    }
  } else {
    if (type == MsgType::kPrepare && state_ == SessionState::kIdle && pending_) {
      state_ = SessionState::kAwaitingTransform;
      pending_ = false;
    } else if (type == MsgType::kResult && state_ == SessionState::kAwaitingResult) {
      state_ = SessionState::kIdle;
      ++rounds_;
    } else {
      violation("receive", type);
    }
  }
}

Server::Server(ServerConfig config) : config_(std::move(config)) {
  config_.noise.validate();
  config_.source.validate();
  if (config_.n_copies == 0 || config_.n_copies > 32767) {
    throw std::invalid_argument("ServerConfig: n_copies must lie in [1, 32767]");
  }
}

Server::~Server() { shutdown(); }

std::uint16_t Server::listen(const Endpoint& endpoint) {
  listener_ = Socket::listen_on(endpoint);
  return listener_.local_port();
}

void Server::serve(std::optional<std::uint64_t> max_sessions) {
  if (!listener_.valid()) throw std::logic_error("Server::serve before listen");
  while (!stop_.load()) {
    if (max_sessions && sessions_.load() >= *max_sessions) {
      // Wait for the last sessions to finish, then stop.
      if (finished_.load() >= *max_sessions) break;
      std::this_thread::sleep_for(kPollSlice);
      continue;
    }
    auto accepted = listener_.accept(kPollSlice);
    if (!accepted) continue;
    const std::uint64_t id = sessions_++;
    std::lock_guard lock(mu_);
    live_fds_.push_back(accepted->fd());
    workers_.emplace_back([this, s = std::move(*accepted), id]() mutable {
      const int fd = s.fd();
      handle_session(std::move(s), id);
      std::lock_guard inner(mu_);
      std::erase(live_fds_, fd);
      ++finished_;
    });
  }
}

void Server::start() {
  accept_thread_ = std::thread([this] { serve(); });
}

void Server::shutdown() {
  stop_.store(true);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::jthread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : live_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  workers.clear();
  listener_.close();
}

std::vector<ServerRoundLog> Server::round_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

void Server::handle_session(Socket socket, std::uint64_t session_id) {
  Session session(Role::kServer);
  Rng channel_rng = make_rng(config_.seed, Stream::kChannel, session_id);
  Rng server_rng = make_rng(config_.seed, Stream::kServer, session_id);
  double drift = 0.0;
  std::size_t n_sent = 0;
  const Millis idle_wait = std::chrono::hours(24);

  auto fail = [&](wire::ErrorCode code, const std::string& text) {
    ++violations_;
    try {
      send_message(socket, wire::ErrorMsg{code, text});
    } catch (const NetError&) {
    }
  };

  while (!stop_.load()) {
    wire::Message msg;
    try {
      const bool idle = session.state() == SessionState::kIdle;
      msg = recv_message(socket, idle ? idle_wait : config_.timeout, &stop_);
    } catch (const wire::WireError& e) {
      fail(wire::ErrorCode::kMalformedFrame, e.what());
      return;
    } catch (const NetError&) {
      return;
    }

    try {
      session.on_recv(wire::type_of(msg));
    } catch (const NetError& e) {
      fail(wire::ErrorCode::kProtocolViolation, e.what());
      return;
    }

    try {
      if (const auto* hello = std::get_if<wire::Hello>(&msg)) {
        if (hello->version != wire::kProtocolVersion) {
          fail(wire::ErrorCode::kVersionMismatch,
               "server speaks version " + std::to_string(wire::kProtocolVersion));
          return;
        }
        std::size_t n = config_.n_copies;
        if (config_.source.kind == SourceKind::kHeralded) {
          n = 1;
        } else if (config_.source.kind == SourceKind::kCoherent) {
          const double mean = coherent_launch_mean(config_.source, config_.noise);
          n = mean > 0.0 ? std::poisson_distribution<std::size_t>(mean)(server_rng) : 0;
          n = std::min<std::size_t>(n, 32767);
        }
        TransitBatch batch = n > 0 ? server_prepare(n) : Channel::launch({});
        drift = config_.noise.drift.sample(config_.elapsed_min, channel_rng);
        Channel::propagate(batch, drift, 0.0, channel_rng);
        n_sent = n;
        delay_for(config_.delay);
        send_message(socket, wire::Prepare{to_wire(Channel::view(batch))});
        session.on_send(wire::MsgType::kPrepare);
      } else if (const auto* tr = std::get_if<wire::Transformed>(&msg)) {
        TransitBatch batch = Channel::launch(from_wire(tr->states));
        Channel::propagate(batch, drift, config_.noise.loss_prob, channel_rng);
        const Measurement m =
            server_measure(batch, config_.noise, config_.source.window_s, server_rng);
        const std::uint8_t s = m.s ? static_cast<std::uint8_t>(*m.s) : wire::kInconclusive;
        send_message(socket, wire::Result{s});
        {
          std::lock_guard lock(mu_);
          log_.push_back({session_id, session.rounds(), n_sent, m.s, m.clicks});
        }
        session.on_send(wire::MsgType::kResult);
      } else {
        return;  // CLOSE or ERRORMSG
      }
    } catch (const NetError&) {
      return;
    } catch (const std::invalid_argument& e) {
      fail(wire::ErrorCode::kMalformedFrame, e.what());
      return;
    }
  }
}

void run_server(const Endpoint& endpoint, const ServerConfig& config) {
  Server server(config);
  server.listen(endpoint);
  server.serve();
}

ClientSession::ClientSession(const Endpoint& endpoint, ClientConfig config)
    : socket_(Socket::connect_to(endpoint)), config_(std::move(config)) {}

ClientSession::~ClientSession() { close(); }

void ClientSession::close() {
  if (open()) {
    try {
      session_.on_send(wire::MsgType::kClose);
      send_message(socket_, wire::Close{});
    } catch (const NetError&) {
    }
  }
  socket_.close();
}

NetRoundResult ClientSession::run_round(bool a, bool b) {
  if (!open()) throw NetError(NetErrc::kConnectionLost, "session is closed");
  NetRoundResult out;
  RoundTranscript& t = out.result.transcript;
  t.a = a;
  t.b = b;
  t.mode = config_.mode;

  auto abandon = [&](const NetError& e) {
    out.cause = e.code() == NetErrc::kTimeout ? InconclusiveCause::kTimeout
                                              : InconclusiveCause::kConnectionLost;
    socket_.close();
    return out;
  };
  auto expect = [&](wire::MsgType want) -> wire::Message {
    wire::Message msg = recv_message(socket_, config_.timeout);
    if (const auto* err = std::get_if<wire::ErrorMsg>(&msg)) {
      session_.on_recv(wire::MsgType::kError);
      socket_.close();
      throw NetError(err->code == wire::ErrorCode::kVersionMismatch ? NetErrc::kVersionMismatch
                                                                   : NetErrc::kRemoteError,
                     err->text);
    }
    if (wire::type_of(msg) != want) {
      socket_.close();
      throw NetError(NetErrc::kProtocolViolation,
                     "expected " + std::string(wire::to_string(want)) + ", got " +
                         std::string(wire::to_string(wire::type_of(msg))));
    }
    session_.on_recv(want);
    return msg;
  };

  const std::uint64_t round = session_.rounds();
  try {
    session_.on_send(wire::MsgType::kHello);
    send_message(socket_, wire::Hello{config_.version});

    auto prepared = std::get<wire::Prepare>(expect(wire::MsgType::kPrepare));
    t.t_prepared = Clock::now().time_since_epoch().count();
    t.n_copies = prepared.states.size();
    TransitBatch batch = Channel::launch(from_wire(prepared.states));

    ClientCapability cap(derive_seed(config_.seed, Stream::kClient, round),
                         config_.noise.plate_jitter_sigma, config_.forced_pad);
    t.r = config_.mode == Mode::kAbstract ? client_transform_abstract(batch, a, b, cap)
                                          : client_transform_plates(batch, a, b, cap);
    t.t_transformed = Clock::now().time_since_epoch().count();
    delay_for(config_.delay);
    session_.on_send(wire::MsgType::kTransformed);
    send_message(socket_, wire::Transformed{to_wire(Channel::view(batch))});

    const auto result = std::get<wire::Result>(expect(wire::MsgType::kResult));
    t.t_measured = Clock::now().time_since_epoch().count();
    if (result.s != wire::kInconclusive) {
      t.s = result.s == 1;
      t.decoded = client_decode(*t.s, t.r);
    } else {
      out.cause = InconclusiveCause::kNoDetection;
    }
  } catch (const NetError& e) {
    if (e.code() == NetErrc::kTimeout || e.code() == NetErrc::kConnectionLost) return abandon(e);
    throw;
  } catch (const wire::WireError& e) {
    socket_.close();
    throw NetError(NetErrc::kProtocolViolation, e.what());
  }
  out.result.decoded = t.decoded;
  return out;
}

NetRoundResult run_client(const Endpoint& endpoint, bool a, bool b, const ClientConfig& config) {
  ClientSession session(endpoint, config);
  NetRoundResult r = session.run_round(a, b);
  session.close();
  return r;
}

RecordingRelay::RecordingRelay(Endpoint upstream) : upstream_(std::move(upstream)) {}

RecordingRelay::~RecordingRelay() { stop(); }

std::uint16_t RecordingRelay::listen(const Endpoint& endpoint) {
  listener_ = Socket::listen_on(endpoint);
  return listener_.local_port();
}

void RecordingRelay::start() {
  accept_thread_ = std::thread([this] {
    while (!stop_.load()) {
      auto accepted = listener_.accept(kPollSlice);
      if (!accepted) continue;
      std::lock_guard lock(mu_);
      const std::size_t index = captures_.size();
      captures_.emplace_back();
      pumps_.emplace_back(
          [this, s = std::move(*accepted), index]() mutable { pump(std::move(s), index); });
    }
  });
}

void RecordingRelay::stop() {
  stop_.store(true);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::jthread> pumps;
  {
    std::lock_guard lock(mu_);
    pumps.swap(pumps_);
  }
  pumps.clear();
  listener_.close();
}

std::vector<RecordingRelay::Capture> RecordingRelay::captures() const {
  std::lock_guard lock(mu_);
  return captures_;
}

void RecordingRelay::pump(Socket downstream, std::size_t index) {
  Socket upstream;
  try {
    upstream = Socket::connect_to(upstream_);
  } catch (const NetError&) {
    return;
  }
  std::array<std::uint8_t, 4096> buf{};
  std::array<pollfd, 2> fds{pollfd{downstream.fd(), POLLIN, 0}, pollfd{upstream.fd(), POLLIN, 0}};
  while (!stop_.load()) {
    const int rc = ::poll(fds.data(), fds.size(), static_cast<int>(kPollSlice.count()));
    if (rc < 0 && errno != EINTR) return;
    if (rc <= 0) continue;
    for (std::size_t i = 0; i < 2; ++i) {
      if ((fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
      Socket& from = i == 0 ? downstream : upstream;
      Socket& to = i == 0 ? upstream : downstream;
      const ssize_t n = ::recv(from.fd(), buf.data(), buf.size(), 0);
      if (n <= 0) return;
      const auto chunk = std::span(buf).first(static_cast<std::size_t>(n));
      {
        std::lock_guard lock(mu_);
        auto& sink = i == 0 ? captures_[index].client_to_server : captures_[index].server_to_client;
        sink.insert(sink.end(), chunk.begin(), chunk.end());
      }
      try {
        to.send_all(chunk);
      } catch (const NetError&) {
        return;
      }
    }
  }
}

std::vector<ServerObservation> observations_from_capture(const RecordingRelay::Capture& capture) {
  std::vector<std::vector<CobitState>> returned;
  for (const auto& msg : wire::split_stream(capture.client_to_server)) {
    if (const auto* t = std::get_if<wire::Transformed>(&msg)) returned.push_back(from_wire(t->states));
  }
  std::vector<Outcome> results;
  for (const auto& msg : wire::split_stream(capture.server_to_client)) {
    if (const auto* r = std::get_if<wire::Result>(&msg)) {
      results.push_back(r->s == wire::kInconclusive ? Outcome{} : Outcome{r->s == 1});
    }
  }
  std::vector<ServerObservation> out;
  const std::size_t n = std::min(returned.size(), results.size());
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ServerObservation obs;
    obs.s = results[k];
    obs.returned = std::move(returned[k]);
    obs.clicks.ones = obs.s && *obs.s ? 1 : 0;
    obs.clicks.zeros = obs.s && !*obs.s ? 1 : 0;
    out.push_back(std::move(obs));
  }
  return out;
}

}  // namespace cobit::net
