#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "coverdx/kb.hpp"
#include "coverdx/session.hpp"

namespace coverdx {

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::filesystem::path kb_dir = "kb";
  std::filesystem::path session_store = "sessions";
  std::size_t max_sessions = 256;
  bool lenient = false;

  void check() const;
};

/// JSON reply of one API call.
struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Session service behind the HTTP API.
///
/// Knowledge bases are loaded from `kb_dir/<name>.json`. Each session is
/// persisted as an append-only log in `session_store/<id>.jsonl`: a header
/// line holding the KB snapshot and config, then one line per answer.
/// Constructing the service replays every stored log.
class SessionService {
 public:
  /// Throws ValidationError when a KB file is invalid, ConfigError when the
  /// directory holds no KB or cannot be used.
  explicit SessionService(ServiceConfig config);

  ApiResponse put_kb(const std::string& name, const std::string& body);
  ApiResponse get_kb(const std::string& name) const;
  ApiResponse create_session(const std::string& body);
  ApiResponse get_session(const std::string& id) const;
  ApiResponse answer(const std::string& id, const std::string& body);
  ApiResponse preview(const std::string& id, const std::string& body) const;
  ApiResponse get_summary(const std::string& id) const;

  std::vector<std::string> kb_names() const;
  std::vector<std::string> session_ids() const;
  std::optional<SessionState> session_state(const std::string& id) const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct Entry {
    mutable std::mutex mutex;
    std::string id;
    std::string kb_name;
    SessionState state;
    std::filesystem::path log;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  void load_kbs();
  void recover_sessions();
  std::size_t active_sessions() const;

  ServiceConfig config_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const KnowledgeBase>> kbs_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

/// HTTP front end for a SessionService.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port; throws Error on bind failure.
  int start(const std::string& host, int port);
  /// Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace coverdx
