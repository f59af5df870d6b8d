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

#include "logq/cluster/net.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>
#include <fcntl.h>

namespace logq::cluster {

namespace {

std::string sys_error(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

sockaddr_in resolve(const HostPort& address) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  std::string host = address.host.empty() ? "0.0.0.0" : address.host;
  int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &found);
  if (rc != 0 || found == nullptr) {
    throw Error(ErrorCode::kIo, "cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  sockaddr_in out = *reinterpret_cast<const sockaddr_in*>(found->ai_addr);
  ::freeaddrinfo(found);
  out.sin_port = htons(address.port);
  return out;
}

std::string format_address(const sockaddr_in& addr) {
  char buf[INET_ADDRSTRLEN] = {};
  ::inet_ntop(AF_INET, &addr.sin_addr, buf, sizeof buf);
  return std::string(buf) + ":" + std::to_string(ntohs(addr.sin_port));
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

HostPort parse_host_port(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kBadRequest, "expected host:port, got '" + std::string(text) + "'");
  }
  HostPort out;
  out.host = std::string(text.substr(0, colon));
  auto digits = text.substr(colon + 1);
  unsigned value = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size() || value > 65535) {
    throw Error(ErrorCode::kBadRequest, "bad port in '" + std::string(text) + "'");
  }
  out.port = static_cast<std::uint16_t>(value);
  return out;
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.release();
  }
  return *this;
}

int Socket::release() {
  int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::shutdown() const {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Listener::Listener(const HostPort& address) {
  sockaddr_in addr = resolve(address);
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) throw Error(ErrorCode::kIo, sys_error("socket"));
  int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw Error(ErrorCode::kIo, sys_error("cannot bind " + address.str()));
  }
  if (::listen(s.fd(), 64) != 0) throw Error(ErrorCode::kIo, sys_error("listen"));
  socklen_t len = sizeof addr;
  ::getsockname(s.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  host_ = address.host.empty() ? "0.0.0.0" : address.host;
  socket_ = std::move(s);
}

std::optional<Socket> Listener::accept() {
  for (;;) {
    int fd = ::accept4(socket_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) {
      set_nodelay(fd);
      return Socket(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return std::nullopt;
  }
}

void Listener::close() { socket_.shutdown(); }

Connection::Connection(Socket socket) : socket_(std::move(socket)) {}

void Connection::send(const WireMessage& message) { send_frame(encode_frame(message)); }

void Connection::send_frame(std::string_view frame) {
  std::lock_guard lock(send_mu_);
  std::size_t done = 0;
  while (done < frame.size()) {
    ssize_t n = ::send(socket_.fd(), frame.data() + done, frame.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, sys_error("send"));
    }
    done += static_cast<std::size_t>(n);
  }
}

bool Connection::read_exact(char* out, std::size_t length, bool eof_ok) {
  std::size_t done = 0;
  while (done < length) {
    ssize_t n = ::recv(socket_.fd(), out + done, length - done, 0);
    if (n == 0) {
      if (eof_ok && done == 0) return false;
      throw Error(ErrorCode::kIo, "connection closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo, sys_error("recv"));
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

std::optional<WireMessage> Connection::receive() {
  char header[4];
  if (!read_exact(header, 4, true)) return std::nullopt;
  std::uint32_t length = read_be32(header);
  if (length > kMaxFrameBytes) {
    throw Error(ErrorCode::kProtocol, "frame of " + std::to_string(length) + " bytes refused");
  }
  std::string payload(length, '\0');
  read_exact(payload.data(), length, false);
  return decode_payload(payload);
}

std::string Connection::local_address() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) return "";
  return format_address(addr);
}

std::unique_ptr<Connection> connect_to(const HostPort& address,
                                       std::chrono::milliseconds timeout) {
  sockaddr_in addr = resolve(address);
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!s.valid()) throw Error(ErrorCode::kIo, sys_error("socket"));
  int rc = ::connect(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  if (rc != 0 && errno != EINPROGRESS) {
    throw Error(ErrorCode::kIo, sys_error("cannot connect to " + address.str()));
  }
  if (rc != 0) {
    pollfd p{s.fd(), POLLOUT, 0};
    rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc == 0) throw Error(ErrorCode::kIo, "timed out connecting to " + address.str());
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (rc < 0 || err != 0) {
      errno = err != 0 ? err : errno;
      throw Error(ErrorCode::kIo, sys_error("cannot connect to " + address.str()));
    }
  }
  int flags = ::fcntl(s.fd(), F_GETFL);
  ::fcntl(s.fd(), F_SETFL, flags & ~O_NONBLOCK);
  set_nodelay(s.fd());
  return std::make_unique<Connection>(std::move(s));
}

}  // namespace logq::cluster
