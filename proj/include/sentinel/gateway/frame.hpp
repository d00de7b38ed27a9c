#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel::gateway {

/// Wire layout, all integers big-endian:
///
///   +---------+------------+-------------+------------------+
///   | command | message id | body length | body             |
///   | 1 byte  | 2 bytes    | 2 bytes     | body length bytes|
///   +---------+------------+-------------+------------------+
///
/// Body fields are UTF-8 separated by 0x00.
enum class Command : std::uint8_t {
  Response = 0x00,
  Login = 0x02,
  Ping = 0x06,
  Notify = 0x0E,
  Hardware = 0x14,
};

bool is_known_command(std::uint8_t byte);
std::string_view to_string(Command c);

constexpr std::size_t kHeaderBytes = 5;
constexpr std::size_t kMaxBodyBytes = 0xFFFF;

struct Frame {
  Command command = Command::Response;
  std::uint16_t message_id = 0;
  std::string body;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Status codes carried as the decimal text body of a RESPONSE frame.
enum class Status : std::uint16_t {
  Ok = 200,
  IllegalCommand = 2,
  NotAuthenticated = 5,
  InvalidToken = 9,
  DeviceOffline = 18,
};

/// Throws std::length_error if the body exceeds kMaxBodyBytes.
std::vector<std::uint8_t> encode_frame(const Frame& f);
void encode_frame_into(const Frame& f, std::vector<std::uint8_t>& out);

enum class DecodeStatus : std::uint8_t { Ok, NeedMore, ProtocolError };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::NeedMore;
  Frame frame;
  // Bytes the frame occupied; 0 unless status is Ok.
  std::size_t consumed = 0;
};

/// Decodes the frame at the front of `bytes`. Fewer than 5 header bytes, or
/// a body not yet fully buffered, give NeedMore. An unknown command byte is
/// a ProtocolError. Never reads past `bytes`.
DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

std::string join_fields(std::initializer_list<std::string_view> fields);
/// An empty body has no fields.
std::vector<std::string_view> split_fields(std::string_view body);

Frame make_response(std::uint16_t id, Status status);
/// Status from a RESPONSE body; returns false when the body is not a number.
bool parse_status(std::string_view body, Status& out);

/// Longest prefix of `text` that fits in max_bytes without splitting a UTF-8
/// sequence.
std::string_view truncate_utf8(std::string_view text, std::size_t max_bytes);

}  // namespace sentinel::gateway
