#include <doctest.h>

#include <memory>
#include <random>
#include <stdexcept>

#include "sentinel/gateway/frame.hpp"
#include "sentinel/gateway/pins.hpp"

using namespace sentinel::gateway;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

Frame random_frame(std::mt19937_64& rng) {
  static constexpr Command cmds[] = {Command::Response, Command::Login, Command::Ping, Command::Notify,
                                     Command::Hardware};
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_int_distribution<int> id(0, 0xFFFF);
  std::uniform_int_distribution<int> len_class(0, 9);
  std::uniform_int_distribution<int> byte(0, 255);
  Frame f;
  f.command = cmds[pick(rng)];
  f.message_id = static_cast<std::uint16_t>(id(rng));
  const int cls = len_class(rng);
  std::size_t len = cls == 9 ? std::uniform_int_distribution<std::size_t>(0, kMaxBodyBytes)(rng)
                             : std::uniform_int_distribution<std::size_t>(0, 64)(rng);
  f.body.resize(len);
  for (auto& c : f.body) c = static_cast<char>(byte(rng));
  return f;
}

}  // namespace

TEST_CASE("hardware frame byte layout") {
  const auto f = make_pin_write(1, VirtualPin::Tilt, "-61.5");
  CHECK(encode_frame(f) ==
        bytes({0x14, 0x00, 0x01, 0x00, 0x0B, 0x76, 0x77, 0x00, 0x56, 0x30, 0x00, 0x2D, 0x36, 0x31, 0x2E, 0x35}));
  const auto w = parse_pin_write(f);
  REQUIRE(w);
  CHECK(w->pin == "V0");
  CHECK(w->value == "-61.5");
}

TEST_CASE("ping and response") {
  const Frame ping{Command::Ping, 0x1234, ""};
  const auto enc = encode_frame(ping);
  CHECK(enc == bytes({0x06, 0x12, 0x34, 0x00, 0x00}));
  const auto r = decode_frame(enc);
  REQUIRE(r.status == DecodeStatus::Ok);
  CHECK(r.frame == ping);
  CHECK(r.consumed == 5);

  const auto resp = make_response(0x1234, Status::Ok);
  CHECK(resp.command == Command::Response);
  CHECK(resp.body == "200");
  Status st{};
  CHECK(parse_status(resp.body, st));
  CHECK(st == Status::Ok);
  CHECK_FALSE(parse_status("abc", st));
  CHECK_FALSE(parse_status("", st));
}

TEST_CASE("short and unknown input") {
  CHECK(decode_frame(bytes({0x14, 0x00, 0x01})).status == DecodeStatus::NeedMore);
  CHECK(decode_frame({}).status == DecodeStatus::NeedMore);
  CHECK(decode_frame(bytes({0x14, 0x00, 0x01, 0x00, 0x03, 0x76})).status == DecodeStatus::NeedMore);
  CHECK(decode_frame(bytes({0x7E, 0x00, 0x01, 0x00, 0x00})).status == DecodeStatus::ProtocolError);
  CHECK(decode_frame(bytes({0x01})).status == DecodeStatus::NeedMore);
  CHECK_FALSE(is_known_command(0x01));
  CHECK(is_known_command(0x0E));
}

TEST_CASE("body length limit") {
  Frame f{Command::Notify, 1, std::string(kMaxBodyBytes, 'x')};
  CHECK(encode_frame(f).size() == kHeaderBytes + kMaxBodyBytes);
  f.body.push_back('y');
  CHECK_THROWS_AS(encode_frame(f), std::length_error);
}

TEST_CASE("consecutive frames in one buffer") {
  std::vector<std::uint8_t> buf;
  encode_frame_into({Command::Ping, 1, ""}, buf);
  encode_frame_into(make_pin_write(2, VirtualPin::Mode, "1"), buf);
  auto r1 = decode_frame(buf);
  REQUIRE(r1.status == DecodeStatus::Ok);
  auto r2 = decode_frame(std::span(buf).subspan(r1.consumed));
  REQUIRE(r2.status == DecodeStatus::Ok);
  CHECK(r2.frame.message_id == 2);
  CHECK(r1.consumed + r2.consumed == buf.size());
}

TEST_CASE("fields and pins") {
  CHECK(join_fields({"vw", "V1", "25.00"}) == std::string("vw\0V1\0" "25.00", 11));
  const auto parts = split_fields(std::string("a\0\0b", 4));
  REQUIRE(parts.size() == 3);
  CHECK(parts[1].empty());
  CHECK(split_fields("").empty());

  CHECK(parse_pin("V4") == VirtualPin::Siren);
  CHECK_FALSE(parse_pin("V5"));
  CHECK_FALSE(parse_pin("v1"));
  CHECK(pin_name(VirtualPin::ArmCommand) == "V3");

  CHECK_FALSE(parse_pin_write({Command::Hardware, 1, std::string("vr\0V1\0" "1", 7)}));
  CHECK_FALSE(parse_pin_write({Command::Hardware, 1, std::string("vw\0V1", 5)}));
  CHECK_FALSE(parse_pin_write({Command::Notify, 1, std::string("vw\0V1\0" "1", 7)}));
  CHECK_FALSE(parse_pin_write({Command::Hardware, 1, std::string("vw\0V1\0" "1\0" "2", 9)}));

  const auto login = make_login(7, "tok", Role::Console);
  CHECK(login.command == Command::Login);
  CHECK(login.body == std::string("tok\0console", 11));
}

TEST_CASE("utf-8 truncation keeps whole code points") {
  const std::string s = "ab\xC3\xA9\xE2\x82\xAC";  // "abé€"
  CHECK(truncate_utf8(s, 100) == s);
  CHECK(truncate_utf8(s, 3) == "ab");
  CHECK(truncate_utf8(s, 4) == "ab\xC3\xA9");
  CHECK(truncate_utf8(s, 6) == "ab\xC3\xA9");
  CHECK(truncate_utf8(s, 7) == s);
  CHECK(truncate_utf8(s, 0).empty());
}

TEST_CASE("property: decode inverts encode") {
  std::mt19937_64 rng(314);
  for (int i = 0; i < 2000; ++i) {
    const auto f = random_frame(rng);
    const auto enc = encode_frame(f);
    CHECK(enc.size() == kHeaderBytes + f.body.size());
    const auto r = decode_frame(enc);
    REQUIRE(r.status == DecodeStatus::Ok);
    CHECK(r.frame == f);
    CHECK(r.consumed == enc.size());
    // Every strict prefix needs more.
    const std::size_t cut = std::uniform_int_distribution<std::size_t>(0, enc.size() - 1)(rng);
    CHECK(decode_frame(std::span(enc).first(cut)).status == DecodeStatus::NeedMore);
  }
}

TEST_CASE("property: random bytes never overrun the buffer") {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> len(0, 64);
  for (int i = 0; i < 20000; ++i) {
    // Exact-size heap allocation so a stray read is visible to sanitizers.
    const auto n = len(rng);
    std::unique_ptr<std::uint8_t[]> buf(new std::uint8_t[n]);
    for (std::size_t k = 0; k < n; ++k) buf[k] = static_cast<std::uint8_t>(byte(rng));
    std::span<const std::uint8_t> rest(buf.get(), n);
    while (!rest.empty()) {
      const auto r = decode_frame(rest);
      if (r.status != DecodeStatus::Ok) break;
      REQUIRE(r.consumed >= kHeaderBytes);
      REQUIRE(r.consumed <= rest.size());
      REQUIRE(r.consumed == kHeaderBytes + r.frame.body.size());
      rest = rest.subspan(r.consumed);
    }
  }
}
