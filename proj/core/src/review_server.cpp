// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <httplib.h>

#include "casesift/errors.hpp"
#include "casesift/review.hpp"

namespace casesift::review {

struct ReviewServer::Impl {
  ReviewService& service;
  std::filesystem::path static_dir;
  httplib::Server server;
  std::thread worker;
  std::mutex write_mu;  // one label writer at a time

  Impl(ReviewService& s, std::filesystem::path dir) : service(s), static_dir(std::move(dir)) { routes(); }

  static void reply(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  }

  void routes() {
    server.Get("/api/session", [this](const httplib::Request&, httplib::Response& res) { reply(res, service.session()); });
    server.Get("/api/cases/next",
               [this](const httplib::Request&, httplib::Response& res) { reply(res, service.next_case()); });
    server.Get(R"(/api/cases/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.case_by_id(req.matches[1].str()));
    });
    server.Get("/api/metrics", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.metrics(req.get_param_value("method")));
    });
    server.Get(R"(/api/predictions/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.predictions(req.matches[1].str()));
    });
    server.Post("/api/labels", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        reply(res, {400, {{"error", "request body is not valid JSON"}}});
        return;
      }
      std::lock_guard lock(write_mu);
      reply(res, service.post_label(body, req.get_header_value("X-Reviewer")));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      reply(res, {500, {{"error", what}}});
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) res.set_content(nlohmann::json{{"error", "not found"}}.dump(), "application/json");
    });
    if (!static_dir.empty() && !server.set_mount_point("/", static_dir.string())) {
      throw IoError("static directory " + static_dir.string() + " does not exist");
    }
  }

  int bind(const std::string& host, int port) {
    if (port == 0) {
      const int bound = server.bind_to_any_port(host);
      if (bound < 0) throw Error("cannot bind " + host + " on any port");
      return bound;
    }
    if (!server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
  }
};

ReviewServer::ReviewServer(ReviewService& service, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(service, std::move(static_dir))) {}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::start(const std::string& host, int port) {
  const int bound = impl_->bind(host, port);
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ReviewServer::serve_forever(const std::string& host, int port) {
  impl_->bind(host, port);
  impl_->server.listen_after_bind();
}

void ReviewServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace casesift::review
