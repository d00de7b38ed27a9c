#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "sentinel/gateway/config.hpp"
#include "sentinel/gateway/event_log.hpp"
#include "sentinel/gateway/hub.hpp"

namespace sentinel::gateway {

class PortInUse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network front end for Hub. One listening port serves both transports:
/// a connection whose first bytes are "GET " is upgraded to WebSocket and
/// carries whole frames in binary messages; anything else is a raw framed
/// TCP stream.
///
/// All I/O and hub dispatch run on the thread that calls run().
class Server {
 public:
  struct Options {
    bool handle_signals = false;  // SIGINT/SIGTERM trigger stop()
  };

  /// Binds immediately. Throws PortInUse if the port is taken.
  explicit Server(GatewayConfig config);
  Server(GatewayConfig config, Options options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const;

  /// Serves until stop(). Bytes already received are processed before every
  /// session is closed with a close record.
  void run();

  /// Thread-safe.
  void stop();

  Hub& hub();
  EventLog& log();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sentinel::gateway
