#include "sentinel/gateway/config.hpp"

namespace sentinel::gateway {

GatewayConfig GatewayConfig::from_key_values(const KeyValues& kv) {
  GatewayConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "server.port") {
      const auto p = parse_uint(key, value);
      if (p > 65535) throw ConfigError("server.port out of range");
      c.port = static_cast<std::uint16_t>(p);
    } else if (key == "server.bind") {
      c.bind = value;
    } else if (key == "auth.token") {
      c.token = value;
    } else if (key == "log.path") {
      c.log_path = value;
    } else if (key == "queue.depth") {
      c.queue_depth = parse_uint(key, value);
    } else {
      throw ConfigError("unknown gateway key '" + key + "'");
    }
  }
  if (c.token.empty()) {
    throw ConfigError("auth.token is required");
  }
  if (c.queue_depth == 0) {
    throw ConfigError("queue.depth must be positive");
  }
  return c;
}

GatewayConfig GatewayConfig::load(const std::filesystem::path& path) {
  return from_key_values(load_key_values(path));
}

}  // namespace sentinel::gateway
