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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "logq/service/service.hpp"

namespace httplib {
class Server;
}

namespace logq::service {

struct HttpOptions {
  std::string listen = "127.0.0.1:8080";
  // Served at "/" when set; otherwise "/" gets a short endpoint listing.
  std::filesystem::path static_dir;
  std::size_t threads = 8;
};

// POST /query, GET /templates, GET /status, GET /healthz.
class HttpServer {
 public:
  HttpServer(QueryService& service, HttpOptions options);
  ~HttpServer();

  // Binds (throws Error(kIo)) and serves on a background thread.
  void start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  void bind();

  QueryService& service_;
  HttpOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::uint16_t port_ = 0;
  std::thread thread_;
};

}  // namespace logq::service
