#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sentinel/kv_config.hpp"

namespace sentinel::gateway {

/// Keys: server.port, server.bind, auth.token, log.path, queue.depth.
/// server.port = 0 binds an ephemeral port.
struct GatewayConfig {
  std::uint16_t port = 8442;
  std::string bind = "127.0.0.1";
  std::string token;
  std::filesystem::path log_path = "sentinel-events.jsonl";
  std::size_t queue_depth = 100;

  static GatewayConfig from_key_values(const KeyValues& kv);
  static GatewayConfig load(const std::filesystem::path& path);
};

}  // namespace sentinel::gateway
