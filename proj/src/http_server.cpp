#include <thread>

#include <httplib.h>

#include "coverdx/service.hpp"

namespace coverdx {

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;
  std::thread worker;

  explicit Impl(SessionService& s) : service(s) { routes(); }

  static void reply(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json");
  }

  void routes() {
    server.Put(R"(/kb/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.put_kb(req.matches[1], req.body));
    });
    server.Get(R"(/kb/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.get_kb(req.matches[1]));
    });
    server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.create_session(req.body));
    });
    server.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      reply(res, service.get_session(req.matches[1]));
    });
    server.Post(R"(/sessions/([^/]+)/answers)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.answer(req.matches[1], req.body));
                });
    server.Post(R"(/sessions/([^/]+)/whatif)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  reply(res, service.preview(req.matches[1], req.body));
                });
    server.Get(R"(/sessions/([^/]+)/summary)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 reply(res, service.get_summary(req.matches[1]));
               });
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string message = "internal error";
          try {
            std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            message = e.what();
          } catch (...) {
          }
          reply(res, {500, {{"error", message}}});
        });
  }
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace coverdx
