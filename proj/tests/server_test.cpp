#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include "httplib.h"
#include "support/random_state.hpp"
#include "support/synthetic.hpp"
#include "topex/server.hpp"

namespace topex {
namespace {

nlohmann::json body_of(const httplib::Result& r) { return nlohmann::json::parse(r->body); }

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<ApiServer>(ServerConfig{"127.0.0.1", 0, std::chrono::hours(1), std::nullopt});
    port_ = server_->bind_any_port();
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_->stop();
    thread_.join();
  }

  std::shared_ptr<const Explorer> load(std::size_t k, std::size_t d, std::uint64_t seed = 1) {
    auto explorer = std::make_shared<const Explorer>(testing::make_random_model(k, 40, d, seed, 0.02));
    server_->set_explorer(explorer);
    return explorer;
  }

  std::string new_session() {
    const auto r = client_->Post("/api/session");
    EXPECT_EQ(r->status, 201);
    return body_of(r)["session_id"];
  }

  httplib::Result post(const std::string& path, const nlohmann::json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  std::unique_ptr<ApiServer> server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, NoModelGives503) {
  EXPECT_EQ(client_->Get("/api/topics")->status, 503);
  EXPECT_EQ(client_->Get("/api/documents")->status, 503);
  const auto id = new_session();
  EXPECT_EQ(post("/api/session/" + id + "/filter", nlohmann::json::object())->status, 503);
}

TEST_F(ServerTest, Topics) {
  load(20, 30);
  auto r = client_->Get("/api/topics");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");
  const auto topics = body_of(r)["topics"];
  ASSERT_EQ(topics.size(), 20u);
  for (const auto& t : topics) EXPECT_EQ(t["words"].size(), 10u);
  EXPECT_EQ(topics[16]["label"], "T17");

  load(1, 5);
  EXPECT_EQ(body_of(client_->Get("/api/topics"))["topics"].size(), 1u);
}

TEST_F(ServerTest, Documents) {
  const auto explorer = load(20, 322);
  auto r = client_->Get("/api/documents?mode=rank");
  ASSERT_EQ(r->status, 200);
  const auto docs = body_of(r)["docs"];
  ASSERT_EQ(docs.size(), 322u);
  const auto prob = body_of(client_->Get("/api/documents?mode=probability"))["docs"];
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto ranks = docs[d]["values"].get<std::vector<int>>();
    const auto probs = prob[d]["values"].get<std::vector<double>>();
    ASSERT_EQ(ranks.size(), 20u);
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j)
        if (probs[i] > probs[j]) EXPECT_LT(ranks[i], ranks[j]);
  }
  EXPECT_EQ(client_->Get("/api/documents?mode=xyz")->status, 400);
  EXPECT_EQ(client_->Get("/api/documents")->body, r->body);
}

TEST_F(ServerTest, FilterEndpoint) {
  const auto explorer = load(4, 25);
  const auto& a = explorer->analytics;
  const auto id = new_session();

  auto r = post("/api/session/" + id + "/filter", nlohmann::json::object());
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(body_of(r)["count"], 25);

  r = post("/api/session/" + id + "/filter", {{"axis_ranges", {{"2", {1, 1}}}}});
  std::size_t expected = 0;
  for (DocId d = 0; d < a.num_docs(); ++d) expected += a.ranks(d)[2] == 1;
  EXPECT_EQ(body_of(r)["count"], expected);
  // Idempotent.
  EXPECT_EQ(post("/api/session/" + id + "/filter", {{"axis_ranges", {{"2", {1, 1}}}}})->body, r->body);

  EXPECT_EQ(post("/api/session/" + id + "/filter", {{"axis_ranges", {{"2", {3, 1}}}}})->status, 422);
  EXPECT_EQ(client_->Post("/api/session/" + id + "/filter", "{not json", "application/json")->status, 400);
  EXPECT_EQ(post("/api/session/ffff/filter", nlohmann::json::object())->status, 404);
}

TEST_F(ServerTest, KeepAndExclude) {
  const auto explorer = load(4, 25);
  const auto id = new_session();
  const auto base = "/api/session/" + id;

  auto r = client_->Post(base + "/keep");
  EXPECT_EQ(body_of(r)["count"], 25);
  EXPECT_EQ(body_of(post(base + "/filter", nlohmann::json::object()))["count"], 25);

  post(base + "/filter", {{"axis_ranges", {{"0", {1, 2}}}}});
  const auto kept = body_of(client_->Post(base + "/keep"));
  const auto kept_ids = kept["doc_ids"].get<std::vector<DocId>>();
  ASSERT_FALSE(kept_ids.empty());
  // Keep cleared the brush; selection is the kept set.
  EXPECT_EQ(body_of(post(base + "/filter", nlohmann::json::object()))["count"], kept_ids.size());

  std::set<DocId> to_exclude = {kept_ids.front(), 24};
  std::size_t overlap = 0;
  for (const auto d : to_exclude) overlap += std::count(kept_ids.begin(), kept_ids.end(), d);
  r = post(base + "/exclude", {{"doc_ids", to_exclude}});
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(body_of(r)["count"], kept_ids.size() - overlap);

  EXPECT_EQ(post(base + "/exclude", {{"doc_ids", {99}}})->status, 422);
  const auto state = body_of(client_->Get(base));
  EXPECT_TRUE(state["excluded"].get<std::set<DocId>>().contains(24));
}

TEST_F(ServerTest, ExcludedDocStaysOut) {
  load(3, 10);
  const auto id = new_session();
  const auto base = "/api/session/" + id;
  post(base + "/exclude", nlohmann::json::array({0}));
  for (const auto& body : {nlohmann::json::object(), nlohmann::json{{"mode", "probability"}}}) {
    const auto ids = body_of(post(base + "/filter", body))["doc_ids"].get<std::vector<DocId>>();
    EXPECT_EQ(std::count(ids.begin(), ids.end(), 0u), 0);
  }
}

TEST_F(ServerTest, KeepOfEmptySelectionWarns) {
  load(3, 10);
  const auto base = "/api/session/" + new_session();
  post(base + "/filter", {{"keyword", "zzzqx"}});
  const auto body = body_of(client_->Post(base + "/keep"));
  EXPECT_TRUE(body.contains("warning"));
  EXPECT_EQ(body_of(client_->Get(base))["kept"], nullptr);
}

TEST_F(ServerTest, Export) {
  const auto explorer = load(5, 12);
  const auto base = "/api/session/" + new_session();
  auto r = client_->Get(base + "/export.csv");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "text/csv");
  EXPECT_NE(r->get_header_value("Content-Disposition").find("attachment"), std::string::npos);
  EXPECT_EQ(r->body, export_csv(apply({}, explorer->analytics), explorer->analytics));

  std::vector<DocId> all(12);
  std::iota(all.begin(), all.end(), 0);
  post(base + "/exclude", {{"doc_ids", all}});
  EXPECT_EQ(client_->Get(base + "/export.csv")->body, export_csv(Selection{}, explorer->analytics));
  EXPECT_EQ(client_->Get("/api/session/0123/export.csv")->status, 404);
}

TEST_F(ServerTest, Search) {
  const auto explorer = load(4, 15);
  EXPECT_EQ(body_of(client_->Get("/api/search?q="))["count"], 15);
  EXPECT_EQ(body_of(client_->Get("/api/search?q=ZZZQX"))["count"], 0);
  const auto term = explorer->analytics.top_words(3)[0].term;
  const auto ids = body_of(client_->Get("/api/search?q=" + term))["doc_ids"].get<std::vector<DocId>>();
  EXPECT_EQ(ids, search(term, explorer->analytics).doc_ids);
}

TEST_F(ServerTest, MatchesLibraryAndIsolatesSessions) {
  const auto explorer = load(4, 18, 9);
  const auto& a = explorer->analytics;
  const auto other = new_session();
  const auto other_before = client_->Post("/api/session/" + other + "/filter", "{}", "application/json")->body;

  std::mt19937_64 rng(31);
  const auto id = new_session();
  for (int i = 0; i < 30; ++i) {
    const auto s = testing::random_state(rng, a);
    const auto r = post("/api/session/" + id + "/filter", to_json(s));
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(body_of(r), to_json(apply(s, a)));
  }
  EXPECT_EQ(client_->Post("/api/session/" + other + "/filter", "{}", "application/json")->body, other_before);
}

TEST_F(ServerTest, NoStaticDirMeansNoFiles) { EXPECT_EQ(client_->Get("/index.html")->status, 404); }

TEST(StaticFiles, ServedFromConfiguredDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "topex_static_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>topex</html>";
  ApiServer server(ServerConfig{"127.0.0.1", 0, std::chrono::hours(1), dir});
  const int port = server.bind_any_port();
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  const auto r = client.Get("/");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, "<html>topex</html>");
  server.stop();
  t.join();
  std::filesystem::remove_all(dir);
}

TEST(SessionStore, ExpiresIdleSessions) {
  auto now = std::chrono::steady_clock::time_point{};
  SessionStore store(std::chrono::seconds(60), [&] { return now; });
  const auto a = store.create();
  now += std::chrono::seconds(30);
  EXPECT_EQ(store.find(a->id), a);
  now += std::chrono::seconds(59);
  EXPECT_EQ(store.find(a->id), a);  // touched 59 s ago
  now += std::chrono::seconds(61);
  EXPECT_EQ(store.find(a->id), nullptr);

  const auto b = store.create();
  const auto c = store.create();
  EXPECT_NE(b->id, c->id);
  EXPECT_EQ(store.size(), 2u);
  now += std::chrono::seconds(61);
  store.expire();
  EXPECT_EQ(store.size(), 0u);
}

}  // namespace
}  // namespace topex
