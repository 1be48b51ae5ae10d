#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "nudgelab/domain/error.hpp"
#include "nudgelab/service/http_server.hpp"
#include "support.hpp"

using namespace nudgelab;
using nudgelab::testing::at;
using nudgelab::testing::content;
using nudgelab::testing::uuid_n;
using nlohmann::json;

namespace {

struct Served {
  Served() : server(rig.router) {
    port = server.bind("127.0.0.1", 0);
    server.start();
    base = "http://127.0.0.1:" + std::to_string(port);
  }
  ~Served() { server.stop(); }

  testing::Rig rig;
  HttpServer server;
  int port = 0;
  std::string base;
};

}  // namespace

TEST_CASE("health and errors over HTTP") {
  Served s;
  HttpApiClient client(s.base);
  auto health = client.get("/api/v1/health");
  CHECK(health.status == 200);
  CHECK(health.body.at("protocol_version") == "1");

  httplib::Client raw(s.base);
  auto res = raw.Post("/api/v1/login", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(res->get_header_value("Content-Type").find("application/json") == 0);
  auto missing = raw.Get("/elsewhere");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body).at("error_code") == "not_found");
}

TEST_CASE("full flow over HTTP") {
  Served s;
  s.rig.clock->set(at("2024-05-06T09:00:00Z"));
  HttpApiClient client(s.base);
  auto reg = client.post("/api/v1/register", {{"username", "net"},
                                              {"password", "password-net"},
                                              {"app_variant", "V2"},
                                              {"language", "EN"}});
  REQUIRE(reg.status == 200);
  auto login = client.post("/api/v1/login", {{"username", "net"}, {"password", "password-net"}});
  auto session = login.body.at("session_token");
  json body = content("hello");
  body["session_token"] = session;
  body["client_event_id"] = uuid_n(1);
  auto share = client.post("/api/v1/share-attempt", body);
  REQUIRE(share.body.at("decision") == "intervene");
  json res = content("hello");
  res["session_token"] = session;
  res["client_event_id"] = uuid_n(2);
  res["intervention_token"] = share.body.at("intervention_token");
  res["action"] = "post";
  auto done = client.post("/api/v1/resolve", res);
  CHECK(done.status == 200);
  CHECK(done.body.at("popup_action") == 1);
  CHECK(s.rig.store.event_count() == 1);
}

TEST_CASE("concurrent clients racing for the last slot") {
  Served s;
  s.rig.clock->set(at("2024-05-06T00:00:00Z"));
  auto [u, session] = s.rig.user("racer");
  for (int k = 0; k < 4; ++k) {
    json b = content("c");
    b["session_token"] = session;
    b["client_event_id"] = uuid_n(k + 1);
    REQUIRE(s.rig.client.post("/api/v1/share-attempt", b).body.at("decision") == "intervene");
    s.rig.clock->advance(std::chrono::hours(1));
  }
  constexpr int kRacers = 8;
  std::vector<json> out(kRacers);
  std::vector<std::thread> threads;
  for (int i = 0; i < kRacers; ++i) {
    threads.emplace_back([&, i] {
      HttpApiClient c(s.base);
      json b = content("c");
      b["session_token"] = session;
      b["client_event_id"] = uuid_n(100 + i);
      out[i] = c.post("/api/v1/share-attempt", b).body;
    });
  }
  for (auto& t : threads) t.join();
  int intervene = 0;
  for (const auto& r : out) intervene += r.at("decision") == "intervene";
  CHECK(intervene == 1);
}

TEST_CASE("unreachable service and occupied port") {
  int port = 0;
  {
    Served s;
    port = s.port;
    testing::Rig other;
    HttpServer second(other.router);
    try {
      second.bind("127.0.0.1", port);
      FAIL("expected the port to be taken");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }
  HttpApiClient client("http://127.0.0.1:" + std::to_string(port));
  try {
    client.get("/api/v1/health");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}
