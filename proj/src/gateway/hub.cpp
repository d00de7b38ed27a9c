#include "sentinel/gateway/hub.hpp"

#include "sentinel/detect/engine.hpp"

namespace sentinel::gateway {

using nlohmann::json;

namespace {

std::string_view alarm_label(std::string_view message) {
  if (message == detect::kTiltMessage) return "tilt";
  if (message == detect::kTempMessage) return "temp";
  return "other";
}

}  // namespace

Hub::Hub(GatewayConfig config, EventLog& log) : config_(std::move(config)), log_(log) {}

std::uint16_t Hub::next_id() {
  const auto id = next_message_id_++;
  if (next_message_id_ == 0) next_message_id_ = 1;
  return id;
}

SessionId Hub::open(SessionSink sink, std::string peer) {
  std::lock_guard lock(mu_);
  const auto id = next_session_++;
  if (shut_down_) {
    sink.close();
    return id;
  }
  sessions_.emplace(id, Session{std::move(sink), std::nullopt, std::move(peer)});
  return id;
}

void Hub::close_locked(SessionId id, std::string_view reason) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    return;
  }
  json payload = {{"session", id}, {"event", "close"}, {"reason", reason}};
  if (it->second.role) payload["role"] = to_string(*it->second.role);
  log_.append(RecordKind::Session, std::move(payload));
  if (device_ == id) device_.reset();
  auto sink = std::move(it->second.sink);
  sessions_.erase(it);
  sink.close();
}

void Hub::send_to_consoles(const Frame& f) {
  for (auto& [sid, s] : sessions_) {
    if (s.role == Role::Console) s.sink.send(f);
  }
}

void Hub::on_frame(SessionId id, const Frame& f) {
  std::lock_guard lock(mu_);
  if (shut_down_) return;
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return;
  Session& s = it->second;

  switch (f.command) {
    case Command::Ping:
      s.sink.send(make_response(f.message_id, Status::Ok));
      return;
    case Command::Response:
      return;
    case Command::Login:
      handle_login(id, s, f);
      return;
    default:
      break;
  }
  if (!s.role) {
    s.sink.send(make_response(f.message_id, Status::NotAuthenticated));
    close_locked(id, "not_authenticated");
    return;
  }
  if (f.command == Command::Hardware) {
    handle_hardware(id, s, f);
  } else if (f.command == Command::Notify) {
    handle_notify(id, s, f);
  }
}

void Hub::handle_login(SessionId id, Session& s, const Frame& f) {
  if (s.role) {
    s.sink.send(make_response(f.message_id, Status::IllegalCommand));
    return;
  }
  const auto fields = split_fields(f.body);
  const std::string_view token = fields.empty() ? std::string_view{} : fields[0];
  const std::string_view role_name = fields.size() > 1 ? fields[1] : std::string_view{"device"};
  std::optional<Role> role;
  if (role_name == "device") role = Role::Device;
  if (role_name == "console") role = Role::Console;

  if (token != config_.token || !role || fields.size() > 2) {
    log_.append(RecordKind::Session, {{"session", id}, {"event", "auth_failed"}, {"peer", s.peer}});
    s.sink.send(make_response(f.message_id, role ? Status::InvalidToken : Status::IllegalCommand));
    close_locked(id, "auth_failed");
    return;
  }

  if (*role == Role::Device && device_) {
    close_locked(*device_, "evicted");
  }
  s.role = role;
  if (*role == Role::Device) device_ = id;
  log_.append(RecordKind::Session, {{"session", id}, {"event", "login"}, {"role", to_string(*role)}, {"peer", s.peer}});
  s.sink.send(make_response(f.message_id, Status::Ok));

  if (*role == Role::Console && !pending_notifications_.empty()) {
    for (const auto& n : pending_notifications_) s.sink.send(n);
    log_.append(RecordKind::Session, {{"session", id},
                                      {"event", "queue_delivered"},
                                      {"count", pending_notifications_.size()}});
    pending_notifications_.clear();
  }
}

void Hub::handle_hardware(SessionId id, Session& s, const Frame& f) {
  const bool from_device = s.role == Role::Device;
  const auto kind = from_device ? RecordKind::Telemetry : RecordKind::Command;
  const auto write = parse_pin_write(f);
  if (!write) {
    log_.append(kind, {{"session", id}, {"warning", "malformed pin write"}});
    s.sink.send(make_response(f.message_id, Status::IllegalCommand));
    return;
  }
  json payload = {{"session", id}, {"pin", write->pin}, {"value", write->value}};
  const auto pin = parse_pin(write->pin);
  if (!pin) {
    payload["warning"] = "unknown pin ignored";
    log_.append(kind, std::move(payload));
    return;
  }

  if (from_device) {
    if (!is_telemetry_pin(*pin)) {
      payload["warning"] = "device wrote command pin";
      log_.append(kind, std::move(payload));
      return;
    }
    pins_[*pin] = write->value;
    log_.append(kind, std::move(payload));
    send_to_consoles(f);
    return;
  }

  if (is_telemetry_pin(*pin)) {
    payload["warning"] = "console wrote telemetry pin";
    log_.append(kind, std::move(payload));
    s.sink.send(make_response(f.message_id, Status::IllegalCommand));
    return;
  }
  if (write->value != "0" && write->value != "1") {
    payload["warning"] = "arm command must be 0 or 1";
    log_.append(kind, std::move(payload));
    s.sink.send(make_response(f.message_id, Status::IllegalCommand));
    return;
  }
  if (!device_) {
    payload["warning"] = "device offline";
    log_.append(kind, std::move(payload));
    s.sink.send(make_response(f.message_id, Status::DeviceOffline));
    return;
  }
  pins_[*pin] = write->value;
  payload["routed"] = *device_;
  log_.append(kind, std::move(payload));
  sessions_.at(*device_).sink.send(f);
}

void Hub::handle_notify(SessionId id, Session& s, const Frame& f) {
  if (s.role != Role::Device) {
    log_.append(RecordKind::Command, {{"session", id}, {"warning", "console sent notify"}});
    s.sink.send(make_response(f.message_id, Status::IllegalCommand));
    return;
  }
  const auto message = truncate_utf8(f.body, kMaxNotificationBytes);
  const bool truncated = message.size() != f.body.size();
  const Frame notify{Command::Notify, f.message_id, std::string(message)};

  std::size_t delivered = 0;
  for (auto& [sid, peer] : sessions_) {
    if (peer.role == Role::Console) {
      peer.sink.send(notify);
      ++delivered;
    }
  }
  std::size_t dropped = 0;
  if (delivered == 0) {
    pending_notifications_.push_back(notify);
    while (pending_notifications_.size() > config_.queue_depth) {
      pending_notifications_.pop_front();
      ++dropped;
    }
  }

  // Siren state rides in the same dispatch step and the same record as the
  // notification.
  pins_[VirtualPin::Siren] = "1";
  json payload = {{"session", id},       {"alarm", alarm_label(message)}, {"message", message},
                  {"siren", 1},          {"delivered", delivered},        {"queued", delivered == 0},
                  {"truncated", truncated}};
  if (dropped) payload["dropped"] = dropped;
  log_.append(RecordKind::Alarm, std::move(payload));
  send_to_consoles(make_pin_write(next_id(), VirtualPin::Siren, "1"));
}

void Hub::on_protocol_error(SessionId id) {
  std::lock_guard lock(mu_);
  close_locked(id, "protocol_error");
}

void Hub::on_disconnect(SessionId id) {
  std::lock_guard lock(mu_);
  close_locked(id, "peer_closed");
}

void Hub::shutdown() {
  std::lock_guard lock(mu_);
  if (shut_down_) return;
  while (!sessions_.empty()) {
    close_locked(sessions_.begin()->first, "shutdown");
  }
  shut_down_ = true;
}

PinState Hub::pins() const {
  std::lock_guard lock(mu_);
  return pins_;
}

std::size_t Hub::console_count() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& [id, s] : sessions_) n += s.role == Role::Console;
  return n;
}

bool Hub::device_online() const {
  std::lock_guard lock(mu_);
  return device_.has_value();
}

std::size_t Hub::queued_notifications() const {
  std::lock_guard lock(mu_);
  return pending_notifications_.size();
}

std::size_t Hub::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

}  // namespace sentinel::gateway
