#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "sentinel/detect/engine.hpp"
#include "sentinel/imu/types.hpp"
#include "sentinel/sim/scenario.hpp"

namespace sentinel::device {

struct DeviceOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8442;
  std::string token;
  sim::Scenario scenario;
  imu::SensorConfig sensor;
  detect::DetectorConfig detector;
  // Playback speed relative to the sample period; 0 streams without pacing.
  double speed = 1.0;
  // Stay connected after the scenario ends, still serving arm/disarm.
  bool hold = false;
  int max_reconnects = 6;
  std::chrono::milliseconds backoff_initial{100};
  std::chrono::milliseconds backoff_max{3200};
};

enum class DeviceExit : std::uint8_t {
  Completed,    // scenario finished
  Stopped,      // request_stop()
  AuthFailed,   // gateway rejected the token
  Unreachable,  // reconnect attempts exhausted
};

/// Simulated door unit: plays a scenario through the IMU emulator and the
/// detection engine, streams V0/V1 telemetry, pushes alarms as NOTIFY and
/// applies V3 arm/disarm commands, echoing V2 (mode) and V4 (siren).
///
/// A reader thread receives commands; the calling thread is the only
/// writer. Connection loss triggers reconnects with exponential backoff.
class DeviceClient {
 public:
  explicit DeviceClient(DeviceOptions options);

  DeviceExit run();

  /// Safe to call from any thread. Takes effect within one pacing tick.
  void request_stop() { stop_.store(true); }

  /// Optional progress hook, called on the writer thread.
  std::function<void(std::string_view)> on_log;

 private:
  DeviceOptions options_;
  std::atomic<bool> stop_{false};
};

}  // namespace sentinel::device
