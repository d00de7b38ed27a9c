#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sentinel/physical.hpp"

namespace sentinel::detect {

inline constexpr std::string_view kTiltMessage = "ALERT! The door has been opened!";
inline constexpr std::string_view kTempMessage = "ALERT! Temperature has spiked!!";

struct DetectorConfig {
  double theta_threshold_deg = 60.0;
  double temp_threshold_c = 60.0;
  std::uint32_t debounce_count = 3;
  bool armed_at_start = true;

  /// Throws std::invalid_argument unless theta_threshold_deg > 0 and
  /// debounce_count >= 1.
  void validate() const;
};

// Numeric values are the wire encoding used on virtual pin V2.
enum class AlarmMode : std::uint8_t { Disarmed = 0, Armed = 1, TiltAlarm = 2, TempAlarm = 3 };

std::string_view to_string(AlarmMode m);
constexpr bool is_alarm(AlarmMode m) { return m == AlarmMode::TiltAlarm || m == AlarmMode::TempAlarm; }

struct AlarmState {
  AlarmMode mode = AlarmMode::Armed;
  bool siren_on = false;
  std::uint32_t consecutive_tilt = 0;
  std::uint32_t consecutive_temp = 0;

  static AlarmState initial(const DetectorConfig& cfg);
  friend bool operator==(const AlarmState&, const AlarmState&) = default;
};

enum class AlarmKind : std::uint8_t { Tilt, Temp };

std::string_view message_for(AlarmKind kind);

struct AlarmEvent {
  AlarmKind kind = AlarmKind::Tilt;
  std::string message;
  std::uint64_t t_ms = 0;
  PhysicalSample sample;

  friend bool operator==(const AlarmEvent&, const AlarmEvent&) = default;
};

enum class SirenCommand : std::uint8_t { Off, On };

struct StepResult {
  AlarmState state;
  std::optional<AlarmEvent> event;
  std::optional<SirenCommand> siren;

  friend bool operator==(const StepResult&, const StepResult&) = default;
};

/// One pass of the detection loop.
///
/// Armed: each threshold keeps its own run of consecutive out-of-band
/// samples (|theta| > theta threshold, temp > temp threshold). The first run
/// to reach debounce_count latches the matching alarm, emits one event and
/// turns the siren on. Tilt wins when both reach the count on the same
/// sample. Alarm modes ignore input until arm(); Disarmed ignores input and
/// holds both counters at zero.
StepResult step(const AlarmState& state, const PhysicalSample& s, const DetectorConfig& cfg);

/// Armed with counters cleared and siren off, from any mode.
AlarmState arm(const AlarmState& state);
/// Disarmed with counters cleared and siren off, from any mode.
AlarmState disarm(const AlarmState& state);

}  // namespace sentinel::detect
