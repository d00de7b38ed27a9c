#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/gateway/config.hpp"
#include "sentinel/gateway/event_log.hpp"
#include "sentinel/gateway/frame.hpp"
#include "sentinel/gateway/pins.hpp"

namespace sentinel::gateway {

/// Longest NOTIFY message relayed; longer ones are cut at a UTF-8 boundary.
constexpr std::size_t kMaxNotificationBytes = 255;

/// Transport callbacks for one connection. Both are invoked with the hub
/// lock held, so they must only queue work and never call back into the hub.
struct SessionSink {
  std::function<void(const Frame&)> send;
  std::function<void()> close;
};

using SessionId = std::uint64_t;

/// Transport-independent session routing for one installation token.
///
/// Every call is serialized on one lock, which gives the event log its
/// total order: relays, notifications and records produced by one frame are
/// emitted before the next frame is looked at.
class Hub {
 public:
  Hub(GatewayConfig config, EventLog& log);

  SessionId open(SessionSink sink, std::string peer = {});
  void on_frame(SessionId id, const Frame& f);
  /// Undecodable input; the session is closed.
  void on_protocol_error(SessionId id);
  /// Transport went away. No-op for sessions the hub already closed.
  void on_disconnect(SessionId id);
  /// Closes every session with reason "shutdown". Later frames are ignored.
  void shutdown();

  PinState pins() const;
  std::size_t console_count() const;
  bool device_online() const;
  std::size_t queued_notifications() const;
  std::size_t session_count() const;

 private:
  struct Session {
    SessionSink sink;
    std::optional<Role> role;
    std::string peer;
  };

  void handle_login(SessionId id, Session& s, const Frame& f);
  void handle_hardware(SessionId id, Session& s, const Frame& f);
  void handle_notify(SessionId id, Session& s, const Frame& f);
  void close_locked(SessionId id, std::string_view reason);
  void send_to_consoles(const Frame& f);
  std::uint16_t next_id();

  GatewayConfig config_;
  EventLog& log_;
  mutable std::mutex mu_;
  std::map<SessionId, Session> sessions_;
  std::optional<SessionId> device_;
  std::deque<Frame> pending_notifications_;
  PinState pins_;
  SessionId next_session_ = 1;
  std::uint16_t next_message_id_ = 1;
  bool shut_down_ = false;
};

}  // namespace sentinel::gateway
