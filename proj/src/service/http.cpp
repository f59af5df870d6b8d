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

#include "logq/service/http.hpp"

#include "httplib.h"

#include "logq/cluster/net.hpp"
#include "logq/common/log.hpp"

namespace logq::service {

namespace {

constexpr const char* kIndexPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>logq</title></head><body>\n"
    "<h1>logq</h1>\n<ul>\n"
    "<li>POST /query {\"sql\": \"...\", \"mode\": \"cached|disk\"}</li>\n"
    "<li>GET /templates</li>\n<li>GET /status</li>\n<li>GET /healthz</li>\n"
    "</ul>\n</body></html>\n";

void send_json(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(QueryService& service, HttpOptions options)
    : service_(service), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  const std::size_t threads = options_.threads == 0 ? 1 : options_.threads;
  s.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  s.set_payload_max_length(4 * 1024 * 1024);

  s.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, service_.handle_query_body(req.body));
  });
  s.Get("/templates", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, service_.handle_templates());
  });
  s.Get("/status", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, service_.handle_status());
  });
  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  if (!options_.static_dir.empty()) {
    if (!s.set_mount_point("/", options_.static_dir.string())) {
      throw Error(ErrorCode::kBadRequest, "static directory " + options_.static_dir.string() +
                                              " does not exist");
    }
  } else {
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kIndexPage, "text/html; charset=utf-8");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::bind() {
  auto address = cluster::parse_host_port(options_.listen);
  const std::string host = address.host.empty() ? "0.0.0.0" : address.host;
  if (address.port == 0) {
    int port = server_->bind_to_any_port(host);
    if (port < 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    port_ = static_cast<std::uint16_t>(port);
  } else {
    if (!server_->bind_to_port(host, address.port)) {
      throw Error(ErrorCode::kIo, "cannot bind " + options_.listen);
    }
    port_ = address.port;
  }
  log_info("serve", "http on " + host + ":" + std::to_string(port_));
}

void HttpServer::start() {
  bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::run() {
  bind();
  server_->listen_after_bind();
}

void HttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace logq::service
