#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sentinel/gateway/pins.hpp"

namespace sentinel::gateway {

enum class RecordKind : std::uint8_t { Telemetry, Alarm, Command, Session };

std::string_view to_string(RecordKind k);
RecordKind parse_record_kind(std::string_view s);

/// One line of the event log:
///   {"seq":N,"t_wall":"2026-01-01T00:00:00.000Z","kind":"alarm","payload":{...}}
struct EventRecord {
  std::uint64_t seq = 0;
  std::string t_wall;
  RecordKind kind = RecordKind::Session;
  nlohmann::json payload;
};

/// Append-only JSON-lines log. Every append is flushed before it returns.
/// Sequence numbers continue from the last record of an existing file.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path path);

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  std::uint64_t append(RecordKind kind, nlohmann::json payload);
  std::uint64_t last_seq() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::ofstream out_;
  std::uint64_t seq_ = 0;
};

/// Parses a log file. Throws std::runtime_error on a malformed line.
std::vector<EventRecord> read_log(const std::filesystem::path& path);

using PinState = std::map<VirtualPin, std::string>;

/// Folds the accepted pin writes and alarms of a log into the final pin
/// values; records carrying a "warning" are skipped.
PinState replay_pins(std::span<const EventRecord> records);

std::string wall_clock_now();

}  // namespace sentinel::gateway
