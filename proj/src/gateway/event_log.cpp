#include "sentinel/gateway/event_log.hpp"

#include <chrono>
#include <ctime>
#include <stdexcept>

namespace sentinel::gateway {

std::string_view to_string(RecordKind k) {
  switch (k) {
    case RecordKind::Telemetry: return "telemetry";
    case RecordKind::Alarm: return "alarm";
    case RecordKind::Command: return "command";
    case RecordKind::Session: return "session";
  }
  return "?";
}

RecordKind parse_record_kind(std::string_view s) {
  for (auto k : {RecordKind::Telemetry, RecordKind::Alarm, RecordKind::Command, RecordKind::Session}) {
    if (s == to_string(k)) return k;
  }
  throw std::runtime_error("unknown record kind '" + std::string(s) + "'");
}

std::string wall_clock_now() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
  const std::time_t tt = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[40];
  const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(ms.count()));
  return buf;
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    const auto existing = read_log(path_);
    if (!existing.empty()) {
      seq_ = existing.back().seq;
    }
  }
  out_.open(path_, std::ios::app);
  if (!out_) {
    throw std::runtime_error("cannot open event log " + path_.string());
  }
}

std::uint64_t EventLog::append(RecordKind kind, nlohmann::json payload) {
  std::lock_guard lock(mu_);
  const auto seq = ++seq_;
  nlohmann::json line = {{"seq", seq}, {"t_wall", wall_clock_now()}, {"kind", to_string(kind)},
                         {"payload", std::move(payload)}};
  out_ << line.dump() << '\n';
  out_.flush();
  return seq;
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mu_);
  return seq_;
}

std::vector<EventRecord> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read event log " + path.string());
  }
  std::vector<EventRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EventRecord r;
      r.seq = j.at("seq").get<std::uint64_t>();
      r.t_wall = j.at("t_wall").get<std::string>();
      r.kind = parse_record_kind(j.at("kind").get<std::string>());
      r.payload = j.at("payload");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

PinState replay_pins(std::span<const EventRecord> records) {
  PinState pins;
  for (const auto& r : records) {
    if (r.payload.contains("warning")) continue;
    switch (r.kind) {
      case RecordKind::Telemetry:
      case RecordKind::Command:
        if (auto pin = parse_pin(r.payload.value("pin", std::string{}))) {
          pins[*pin] = r.payload.value("value", std::string{});
        }
        break;
      case RecordKind::Alarm:
        pins[VirtualPin::Siren] = "1";
        break;
      case RecordKind::Session:
        break;
    }
  }
  return pins;
}

}  // namespace sentinel::gateway
