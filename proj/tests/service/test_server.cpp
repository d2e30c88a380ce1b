#include "../ws_client.hpp"

#include "thermsense/service/server.hpp"
#include "thermsense/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

using namespace thermsense;
using namespace thermsense::service;
using thermsense::testing::WsClient;
using thermsense::testing::http_get;

namespace {

ThermalSequence small_seq(double duration_s = 40.0) {
  SynthConfig cfg;
  cfg.duration_s = duration_s;
  cfg.seed = 11;
  return synthesize_sequence(cfg).sequence;
}

ReplayConfig paused_fast() {
  ReplayConfig rc;
  rc.speed = 0.0;
  rc.autoplay = false;
  return rc;
}

ServerConfig local(std::filesystem::path ui = {}) {
  ServerConfig sc;
  sc.address = "127.0.0.1";
  sc.port = 0;
  sc.ui_dir = std::move(ui);
  return sc;
}

void wait_clients(const Server& s, std::size_t n) {
  for (int i = 0; i < 500 && s.client_count() < n; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  REQUIRE(s.client_count() == n);
}

} // namespace

TEST_CASE("HTTP serves the UI bundle at / and refuses path escapes") {
  const auto dir = std::filesystem::temp_directory_path() / "thermsense_ui_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "index.html") << "<html>bundle</html>";
  std::ofstream(dir / "app.js") << "console.log(1);";

  Server server(small_seq(2.0), paused_fast(), local(dir));
  server.start();
  const auto root = http_get(server.port(), "/");
  CHECK(root.status == 200);
  CHECK(root.content_type == "text/html");
  CHECK(root.body == "<html>bundle</html>");
  const auto js = http_get(server.port(), "/app.js?v=2");
  CHECK(js.status == 200);
  CHECK(js.content_type == "application/javascript");
  CHECK(http_get(server.port(), "/missing.css").status == 404);
  CHECK(http_get(server.port(), "/../etc/passwd").status == 400);
  std::filesystem::remove_all(dir);
}

TEST_CASE("HTTP falls back to a built-in page without a bundle") {
  Server server(small_seq(2.0), paused_fast(), local());
  server.start();
  const auto root = http_get(server.port(), "/");
  CHECK(root.status == 200);
  CHECK(root.body.find("thermsense") != std::string::npos);
}

TEST_CASE("binding a busy port fails") {
  Server a(small_seq(2.0), paused_fast(), local());
  a.start();
  auto sc = local();
  sc.port = a.port();
  Server b(small_seq(2.0), paused_fast(), sc);
  CHECK_THROWS_AS(b.start(), std::system_error);
}

TEST_CASE("WebSocket session: errors keep the connection, ROI ack is broadcast") {
  Server server(small_seq(), paused_fast(), local());
  server.start();
  WsClient a(server.port());
  WsClient b(server.port());
  wait_clients(server, 2);

  a.send_text("not json");
  auto m = a.read();
  REQUIRE(std::holds_alternative<ErrorMsg>(m));
  CHECK(std::get<ErrorMsg>(m).code == "bad_json");

  a.send_binary("\x01\x02");
  m = a.read();
  REQUIRE(std::holds_alternative<ErrorMsg>(m));
  CHECK(std::get<ErrorMsg>(m).code == "bad_message");

  a.send(SetRoiCmd{{-4, 70, 16, 8}});
  m = a.read();
  REQUIRE(std::holds_alternative<ErrorMsg>(m));
  CHECK(std::get<ErrorMsg>(m).code == "roi_out_of_bounds");
  CHECK(std::get<ErrorMsg>(m).detail.find("left") != std::string::npos);

  a.send(SetRoiCmd{SynthConfig{}.nostril_roi});
  for (auto* c : {&a, &b}) {
    m = c->read();
    REQUIRE(std::holds_alternative<RoiAckMsg>(m));
    CHECK(std::get<RoiAckMsg>(m).roi == SynthConfig{}.nostril_roi);
  }

  a.send(PlayCmd{});
  const auto all_a = a.read_until_end();
  const auto all_b = b.read_until_end();
  CHECK(all_a.size() == all_b.size());
  std::size_t frames = 0, rates = 0;
  for (const auto& x : all_a) {
    frames += std::holds_alternative<FrameMsg>(x);
    rates += std::holds_alternative<RateMsg>(x);
  }
  CHECK(frames == server.driver().sequence().frames.size());
  CHECK(rates > 0);
  a.close();
  b.close();
}
