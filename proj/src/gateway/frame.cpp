#include "sentinel/gateway/frame.hpp"

#include <charconv>
#include <stdexcept>

namespace sentinel::gateway {

bool is_known_command(std::uint8_t byte) {
  switch (static_cast<Command>(byte)) {
    case Command::Response:
    case Command::Login:
    case Command::Ping:
    case Command::Notify:
    case Command::Hardware:
      return true;
  }
  return false;
}

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Response: return "RESPONSE";
    case Command::Login: return "LOGIN";
    case Command::Ping: return "PING";
    case Command::Notify: return "NOTIFY";
    case Command::Hardware: return "HARDWARE";
  }
  return "?";
}

void encode_frame_into(const Frame& f, std::vector<std::uint8_t>& out) {
  if (f.body.size() > kMaxBodyBytes) {
    throw std::length_error("frame body exceeds 65535 bytes");
  }
  const auto len = static_cast<std::uint16_t>(f.body.size());
  out.reserve(out.size() + kHeaderBytes + len);
  out.push_back(static_cast<std::uint8_t>(f.command));
  out.push_back(static_cast<std::uint8_t>(f.message_id >> 8));
  out.push_back(static_cast<std::uint8_t>(f.message_id & 0xFF));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len & 0xFF));
  out.insert(out.end(), f.body.begin(), f.body.end());
}

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  std::vector<std::uint8_t> out;
  encode_frame_into(f, out);
  return out;
}

DecodeResult decode_frame(std::span<const std::uint8_t> bytes) {
  DecodeResult r;
  if (bytes.size() < kHeaderBytes) {
    return r;
  }
  if (!is_known_command(bytes[0])) {
    r.status = DecodeStatus::ProtocolError;
    return r;
  }
  const std::size_t len = (static_cast<std::size_t>(bytes[3]) << 8) | bytes[4];
  if (bytes.size() - kHeaderBytes < len) {
    return r;
  }
  r.status = DecodeStatus::Ok;
  r.frame.command = static_cast<Command>(bytes[0]);
  r.frame.message_id = static_cast<std::uint16_t>((bytes[1] << 8) | bytes[2]);
  const auto body = bytes.subspan(kHeaderBytes, len);
  r.frame.body.assign(body.begin(), body.end());
  r.consumed = kHeaderBytes + len;
  return r;
}

std::string join_fields(std::initializer_list<std::string_view> fields) {
  std::string out;
  bool first = true;
  for (auto f : fields) {
    if (!first) out.push_back('\0');
    out.append(f);
    first = false;
  }
  return out;
}

std::vector<std::string_view> split_fields(std::string_view body) {
  std::vector<std::string_view> out;
  if (body.empty()) {
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto nul = body.find('\0', start);
    if (nul == std::string_view::npos) {
      out.push_back(body.substr(start));
      break;
    }
    out.push_back(body.substr(start, nul - start));
    start = nul + 1;
  }
  return out;
}

Frame make_response(std::uint16_t id, Status status) {
  return Frame{Command::Response, id, std::to_string(static_cast<unsigned>(status))};
}

bool parse_status(std::string_view body, Status& out) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc{} || ptr != body.data() + body.size() || v > 0xFFFF) {
    return false;
  }
  out = static_cast<Status>(v);
  return true;
}

std::string_view truncate_utf8(std::string_view text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) {
    return text;
  }
  std::size_t cut = max_bytes;
  // Back off over continuation bytes (10xxxxxx) to a sequence start.
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) {
    --cut;
  }
  return text.substr(0, cut);
}

}  // namespace sentinel::gateway
