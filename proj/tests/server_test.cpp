#include <doctest.h>

#include <thread>

#include "sentinel/detect/engine.hpp"
#include "sentinel/gateway/server.hpp"
#include "support/frame_client.hpp"
#include "support/temp_dir.hpp"

using namespace sentinel;
using namespace sentinel::gateway;
using sentinel::testing::FrameClient;
using sentinel::testing::is_pin_write;
using sentinel::testing::TempDir;
using Transport = FrameClient::Transport;

namespace {

struct RunningServer {
  TempDir dir;
  GatewayConfig config;
  std::unique_ptr<Server> server;
  std::thread thread;

  RunningServer() {
    config.port = 0;
    config.token = "tok";
    config.log_path = dir / "events.jsonl";
    server = std::make_unique<Server>(config);
    thread = std::thread([this] { server->run(); });
  }
  ~RunningServer() { stop(); }

  void stop() {
    if (thread.joinable()) {
      server->stop();
      thread.join();
    }
  }
  std::uint16_t port() const { return server->port(); }
  std::vector<EventRecord> records() const { return read_log(config.log_path); }
};

bool wait_for(auto pred, std::chrono::milliseconds timeout = std::chrono::milliseconds(3000)) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (!pred()) {
    if (std::chrono::steady_clock::now() > deadline) return false;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  return true;
}

}  // namespace

TEST_CASE("tcp and websocket consoles see the same relayed frames") {
  RunningServer srv;
  FrameClient tcp_console(srv.port(), Transport::Tcp);
  FrameClient ws_console(srv.port(), Transport::WebSocket);
  FrameClient device(srv.port(), Transport::Tcp);
  REQUIRE(tcp_console.login("tok", Role::Console) == Status::Ok);
  REQUIRE(ws_console.login("tok", Role::Console) == Status::Ok);
  REQUIRE(device.login("tok", Role::Device) == Status::Ok);

  const auto f = make_pin_write(42, VirtualPin::Tilt, "61.50");
  device.send(f);
  const auto a = tcp_console.recv();
  const auto b = ws_console.recv();
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a == f);
  CHECK(*b == f);

  device.send({Command::Notify, 43, std::string(detect::kTiltMessage)});
  for (auto* c : {&tcp_console, &ws_console}) {
    auto n = c->recv();
    REQUIRE(n);
    CHECK(n->command == Command::Notify);
    CHECK(n->body == detect::kTiltMessage);
    auto siren = c->recv();
    REQUIRE(siren);
    CHECK(is_pin_write(*siren, "V4", "1"));
  }
}

TEST_CASE("websocket console arms the device") {
  RunningServer srv;
  FrameClient device(srv.port());
  FrameClient console(srv.port(), Transport::WebSocket);
  REQUIRE(device.login("tok", Role::Device) == Status::Ok);
  REQUIRE(console.login("tok", Role::Console) == Status::Ok);
  const auto cmd = make_pin_write(5, VirtualPin::ArmCommand, "1");
  console.send(cmd);
  const auto got = device.recv();
  REQUIRE(got);
  CHECK(*got == cmd);
}

TEST_CASE("ping over both transports echoes the id") {
  RunningServer srv;
  for (auto t : {Transport::Tcp, Transport::WebSocket}) {
    FrameClient c(srv.port(), t);
    c.send({Command::Ping, 0x0A0B, ""});
    const auto r = c.recv();
    REQUIRE(r);
    CHECK(*r == make_response(0x0A0B, Status::Ok));
  }
}

TEST_CASE("frames split across tcp segments are reassembled") {
  RunningServer srv;
  FrameClient c(srv.port());
  auto bytes = encode_frame(make_login(9, "tok", Role::Console));
  encode_frame_into({Command::Ping, 10, ""}, bytes);
  for (auto b : bytes) {
    c.send_raw({b});
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  const auto r1 = c.recv();
  const auto r2 = c.recv();
  REQUIRE(r1);
  REQUIRE(r2);
  CHECK(*r1 == make_response(9, Status::Ok));
  CHECK(*r2 == make_response(10, Status::Ok));
}

TEST_CASE("undecodable input closes the session with a protocol_error record") {
  RunningServer srv;
  FrameClient c(srv.port());
  REQUIRE(c.login("tok", Role::Console) == Status::Ok);
  c.send_raw({0x7F, 0x00, 0x01, 0x00, 0x00});
  CHECK(c.wait_closed());
  REQUIRE(wait_for([&] { return srv.server->hub().session_count() == 0; }));
  const auto rs = srv.records();
  CHECK(rs.back().payload["reason"] == "protocol_error");
}

TEST_CASE("wrong token closes the connection") {
  RunningServer srv;
  FrameClient c(srv.port(), Transport::WebSocket);
  CHECK(c.login("bad", Role::Device) == Status::InvalidToken);
  CHECK(c.wait_closed());
}

TEST_CASE("peer disconnect is recorded and the device goes offline") {
  RunningServer srv;
  {
    FrameClient device(srv.port());
    REQUIRE(device.login("tok", Role::Device) == Status::Ok);
    REQUIRE(wait_for([&] { return srv.server->hub().device_online(); }));
  }
  REQUIRE(wait_for([&] { return !srv.server->hub().device_online(); }));
  FrameClient console(srv.port());
  REQUIRE(console.login("tok", Role::Console) == Status::Ok);
  console.send(make_pin_write(3, VirtualPin::ArmCommand, "0"));
  const auto r = console.recv();
  REQUIRE(r);
  CHECK(*r == make_response(3, Status::DeviceOffline));
}

TEST_CASE("buffered device frames are processed before shutdown closes sessions") {
  for (int i = 0; i < 20; ++i) {
    RunningServer srv;
    FrameClient console(srv.port());
    FrameClient device(srv.port());
    REQUIRE(console.login("tok", Role::Console) == Status::Ok);
    REQUIRE(device.login("tok", Role::Device) == Status::Ok);
    device.send({Command::Notify, 1, std::string(detect::kTempMessage)});
    srv.stop();

    const auto rs = srv.records();
    std::size_t alarms = 0;
    for (const auto& r : rs) alarms += r.kind == RecordKind::Alarm;
    CHECK(alarms == 1);
    CHECK(rs.back().kind == RecordKind::Session);
    CHECK(rs.back().payload["reason"] == "shutdown");
    std::size_t closes = 0;
    for (const auto& r : rs) closes += r.payload.value("event", "") == "close";
    CHECK(closes == 2);
    CHECK(console.wait_closed());
  }
}

TEST_CASE("a second server on the same port is refused") {
  RunningServer srv;
  GatewayConfig cfg = srv.config;
  cfg.port = srv.port();
  cfg.log_path = srv.dir / "other.jsonl";
  CHECK_THROWS_AS(Server{cfg}, PortInUse);
}

TEST_CASE("sequence numbers stay strictly increasing under interleaved clients") {
  RunningServer srv;
  FrameClient device(srv.port());
  FrameClient c1(srv.port()), c2(srv.port(), Transport::WebSocket);
  REQUIRE(device.login("tok", Role::Device) == Status::Ok);
  REQUIRE(c1.login("tok", Role::Console) == Status::Ok);
  REQUIRE(c2.login("tok", Role::Console) == Status::Ok);
  for (int i = 0; i < 200; ++i) {
    device.send(make_pin_write(static_cast<std::uint16_t>(i), VirtualPin::Temperature, std::to_string(i)));
    if (i % 10 == 0) c1.send(make_pin_write(1000, VirtualPin::Tilt, "1"));
  }
  REQUIRE(c2.recv_until([](const Frame& f) { return is_pin_write(f, "V1", "199"); }));
  srv.stop();
  const auto rs = srv.records();
  for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].seq == rs[i - 1].seq + 1);
  CHECK(replay_pins(rs) == srv.server->hub().pins());
}
