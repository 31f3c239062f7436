#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "topex/analytics.hpp"
#include "topex/filter.hpp"
#include "topex/lda.hpp"

namespace httplib {
class Server;
}

namespace topex {

// Immutable model plus derived views, shared by every request.
struct Explorer {
  explicit Explorer(TopicModel m, AnalyticsConfig cfg = {})
      : model(std::move(m)), analytics(model, cfg) {}

  TopicModel model;
  Analytics analytics;
};

struct Session {
  std::string id;
  FilterState state;
  std::chrono::steady_clock::time_point created_at;
  std::chrono::steady_clock::time_point last_used;
  // Serializes mutations of this session.
  std::mutex mutex;
};

// Session table with idle expiry.
class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionStore(std::chrono::seconds ttl = std::chrono::hours(1), Clock clock = {});

  std::shared_ptr<Session> create();
  // nullptr for unknown or expired ids. Touches the session.
  std::shared_ptr<Session> find(const std::string& id);
  // Drops every session idle for longer than the ttl.
  void expire();
  std::size_t size() const;

 private:
  std::chrono::steady_clock::time_point now() const;

  std::chrono::seconds ttl_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_;
};

struct ServerConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::chrono::seconds session_ttl = std::chrono::hours(1);
  std::optional<std::filesystem::path> static_dir;
};

// JSON API over HTTP/1.1:
//   GET  /api/topics
//   GET  /api/documents?mode=rank|probability
//   GET  /api/search?q=...
//   POST /api/session                        -> {"session_id"}
//   GET  /api/session/{id}                   -> filter state
//   POST /api/session/{id}/filter            -> selection
//   POST /api/session/{id}/keep              -> selection
//   POST /api/session/{id}/exclude           -> selection
//   GET  /api/session/{id}/export.csv        -> text/csv attachment
// Everything under / is served from static_dir when configured.
class ApiServer {
 public:
  explicit ApiServer(ServerConfig cfg);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Until a model is set, model-backed endpoints answer 503.
  void set_explorer(std::shared_ptr<const Explorer> explorer);

  // Blocks until stop(). Returns false if the socket could not be bound.
  bool listen();
  // Binds an ephemeral port on host and returns it, or -1.
  int bind_any_port();
  // Serves on a socket bound by bind_any_port(). Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  SessionStore& sessions() { return sessions_; }

 private:
  void install_routes();
  std::shared_ptr<const Explorer> explorer() const;

  ServerConfig cfg_;
  std::unique_ptr<httplib::Server> http_;
  SessionStore sessions_;
  mutable std::shared_mutex explorer_mutex_;
  std::shared_ptr<const Explorer> explorer_;
};

}  // namespace topex
