// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "logq/cluster/wire.hpp"

// Blocking TCP plumbing for the framed protocol.
namespace logq::cluster {

struct HostPort {
  std::string host;
  std::uint16_t port = 0;

  std::string str() const { return host + ":" + std::to_string(port); }
};

// "host:port"; throws Error(kBadRequest).
HostPort parse_host_port(std::string_view text);

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();
  // Wakes any thread blocked on the socket; the descriptor stays open.
  void shutdown() const;

 private:
  int fd_ = -1;
};

class Listener {
 public:
  // Throws Error(kIo) when the address cannot be bound.
  explicit Listener(const HostPort& address);

  std::uint16_t port() const { return port_; }
  const std::string& host() const { return host_; }
  // Empty once close() has been called.
  std::optional<Socket> accept();
  void close();

 private:
  Socket socket_;
  std::string host_;
  std::uint16_t port_ = 0;
};

// One framed, bidirectional stream. send() may be called from several
// threads; receive() from one.
class Connection {
 public:
  explicit Connection(Socket socket);

  void send(const WireMessage& message);
  void send_frame(std::string_view frame);
  // Empty on orderly close at a frame boundary. Throws kIo on socket errors
  // and kProtocol on malformed frames.
  std::optional<WireMessage> receive();
  void shutdown() const { socket_.shutdown(); }
  // "host:port" of the local end.
  std::string local_address() const;

 private:
  bool read_exact(char* out, std::size_t length, bool eof_ok);

  Socket socket_;
  std::mutex send_mu_;
};

// Throws Error(kIo) when the peer cannot be reached within `timeout`.
std::unique_ptr<Connection> connect_to(const HostPort& address,
                                        std::chrono::milliseconds timeout = std::chrono::seconds(5));

}  // namespace logq::cluster
