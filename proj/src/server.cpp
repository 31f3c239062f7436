#include "topex/server.hpp"

#include <iomanip>
#include <random>
#include <sstream>

#include "httplib.h"
#include "topex/error.hpp"

namespace topex {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, {{"error", message}}, status);
}

// Empty bodies count as {}.
std::optional<nlohmann::json> parse_body(const httplib::Request& req, httplib::Response& res) {
  if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    send_error(res, 400, std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace

SessionStore::SessionStore(std::chrono::seconds ttl, Clock clock)
    : ttl_(ttl), clock_(std::move(clock)), salt_(std::random_device{}()) {
  salt_ = (salt_ << 32) ^ std::random_device{}();
}

std::chrono::steady_clock::time_point SessionStore::now() const {
  return clock_ ? clock_() : std::chrono::steady_clock::now();
}

std::shared_ptr<Session> SessionStore::create() {
  expire();
  std::lock_guard lock(mutex_);
  auto session = std::make_shared<Session>();
  do {
    const std::uint64_t n = ++counter_;
    std::ostringstream id;
    id << std::hex << std::setfill('0') << std::setw(16) << splitmix64(salt_ ^ n) << std::setw(16)
       << splitmix64(salt_ + n * 0x2545F4914F6CDD1DULL);
    session->id = id.str();
  } while (sessions_.contains(session->id));
  session->created_at = session->last_used = now();
  sessions_.emplace(session->id, session);
  return session;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  const auto t = now();
  if (t - it->second->last_used > ttl_) {
    sessions_.erase(it);
    return nullptr;
  }
  it->second->last_used = t;
  return it->second;
}

void SessionStore::expire() {
  std::lock_guard lock(mutex_);
  const auto t = now();
  std::erase_if(sessions_, [&](const auto& entry) { return t - entry.second->last_used > ttl_; });
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

ApiServer::ApiServer(ServerConfig cfg)
    : cfg_(std::move(cfg)), http_(std::make_unique<httplib::Server>()), sessions_(cfg_.session_ttl) {
  install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::set_explorer(std::shared_ptr<const Explorer> explorer) {
  std::unique_lock lock(explorer_mutex_);
  explorer_ = std::move(explorer);
}

std::shared_ptr<const Explorer> ApiServer::explorer() const {
  std::shared_lock lock(explorer_mutex_);
  return explorer_;
}

bool ApiServer::listen() { return http_->listen(cfg_.host, cfg_.port); }
int ApiServer::bind_any_port() { return http_->bind_to_any_port(cfg_.host); }
bool ApiServer::listen_after_bind() { return http_->listen_after_bind(); }
void ApiServer::stop() {
  if (http_->is_running()) http_->stop();
}
void ApiServer::wait_until_ready() const { http_->wait_until_ready(); }

void ApiServer::install_routes() {
  auto& http = *http_;

  // Resolves the model and (optionally) the session named in the path,
  // writing the error response when either is missing.
  struct Context {
    std::shared_ptr<const Explorer> explorer;
    std::shared_ptr<Session> session;
  };
  auto resolve = [this](const httplib::Request& req, httplib::Response& res,
                        bool with_session) -> std::optional<Context> {
    Context ctx{explorer(), nullptr};
    if (with_session) {
      ctx.session = sessions_.find(req.matches[1]);
      if (!ctx.session) {
        send_error(res, 404, "unknown session");
        return std::nullopt;
      }
    }
    if (!ctx.explorer) {
      send_error(res, 503, "no model loaded");
      return std::nullopt;
    }
    return ctx;
  };

  http.Get("/api/topics", [=](const httplib::Request& req, httplib::Response& res) {
    if (auto ctx = resolve(req, res, false)) send_json(res, ctx->explorer->analytics.topics_json());
  });

  http.Get("/api/documents", [=](const httplib::Request& req, httplib::Response& res) {
    auto mode = DisplayMode::kRank;
    if (req.has_param("mode")) {
      const auto parsed = parse_mode(req.get_param_value("mode"));
      if (!parsed) return send_error(res, 400, "mode must be 'rank' or 'probability'");
      mode = *parsed;
    }
    if (auto ctx = resolve(req, res, false)) send_json(res, ctx->explorer->analytics.documents_json(mode));
  });

  http.Get("/api/search", [=](const httplib::Request& req, httplib::Response& res) {
    if (auto ctx = resolve(req, res, false))
      send_json(res, to_json(search(req.get_param_value("q"), ctx->explorer->analytics)));
  });

  http.Post("/api/session", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, {{"session_id", sessions_.create()->id}}, 201);
  });

  http.Get(R"(/api/session/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto session = sessions_.find(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    std::lock_guard lock(session->mutex);
    send_json(res, to_json(session->state));
  });

  http.Post(R"(/api/session/([0-9a-f]+)/filter)", [=](const httplib::Request& req, httplib::Response& res) {
    auto ctx = resolve(req, res, true);
    if (!ctx) return;
    const auto body = parse_body(req, res);
    if (!body) return;
    const auto& analytics = ctx->explorer->analytics;
    std::lock_guard lock(ctx->session->mutex);
    try {
      FilterState next = filter_state_from_json(*body);
      // Set operations persist unless the body names them explicitly.
      if (!body->contains("excluded")) next.excluded_docs = ctx->session->state.excluded_docs;
      if (!body->contains("kept")) next.kept_docs = ctx->session->state.kept_docs;
      const Selection selection = apply(next, analytics);
      ctx->session->state = std::move(next);
      send_json(res, to_json(selection));
    } catch (const StateError& e) {
      send_error(res, 422, e.what());
    }
  });

  http.Post(R"(/api/session/([0-9a-f]+)/keep)", [=](const httplib::Request& req, httplib::Response& res) {
    auto ctx = resolve(req, res, true);
    if (!ctx) return;
    const auto& analytics = ctx->explorer->analytics;
    std::lock_guard lock(ctx->session->mutex);
    const auto current = apply(ctx->session->state, analytics);
    auto result = keep(ctx->session->state, current);
    ctx->session->state = std::move(result.state);
    auto body = to_json(apply(ctx->session->state, analytics));
    if (result.warning) body["warning"] = "selection is empty; keep ignored";
    send_json(res, body);
  });

  http.Post(R"(/api/session/([0-9a-f]+)/exclude)", [=](const httplib::Request& req, httplib::Response& res) {
    auto ctx = resolve(req, res, true);
    if (!ctx) return;
    const auto body = parse_body(req, res);
    if (!body) return;
    const auto& analytics = ctx->explorer->analytics;
    const nlohmann::json ids = body->is_array() ? *body : body->value("doc_ids", nlohmann::json::array());
    std::set<DocId> docs;
    try {
      const auto parsed = filter_state_from_json({{"excluded", ids}});
      docs = parsed.excluded_docs;
    } catch (const StateError& e) {
      return send_error(res, 422, e.what());
    }
    if (!docs.empty() && *docs.rbegin() >= analytics.num_docs())
      return send_error(res, 422, "document id " + std::to_string(*docs.rbegin()) + " out of range");
    std::lock_guard lock(ctx->session->mutex);
    ctx->session->state = exclude(ctx->session->state, docs);
    send_json(res, to_json(apply(ctx->session->state, analytics)));
  });

  http.Get(R"(/api/session/([0-9a-f]+)/export\.csv)", [=](const httplib::Request& req, httplib::Response& res) {
    auto ctx = resolve(req, res, true);
    if (!ctx) return;
    const auto& analytics = ctx->explorer->analytics;
    std::string csv;
    {
      std::lock_guard lock(ctx->session->mutex);
      csv = export_csv(apply(ctx->session->state, analytics), analytics);
    }
    res.set_header("Content-Disposition", "attachment; filename=\"selection.csv\"");
    res.set_content(std::move(csv), "text/csv");
  });

  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    } catch (...) {
      send_error(res, 500, "internal error");
    }
  });

  if (cfg_.static_dir) http.set_mount_point("/", cfg_.static_dir->string());
}

}  // namespace topex
