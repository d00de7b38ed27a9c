#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sentinel/detect/engine.hpp"
#include "sentinel/detect/siren.hpp"
#include "sentinel/imu/mpu6050.hpp"
#include "sentinel/sim/scenario.hpp"

namespace sentinel::sim {

/// Firmware-side loop. Each sample is injected into the emulated IMU and read
/// back over the bus before it reaches the alarm state machine.
class Monitor {
 public:
  Monitor(imu::SensorConfig sensor, detect::DetectorConfig detector);

  struct Output {
    PhysicalSample sample;
    std::optional<detect::AlarmEvent> event;
    std::optional<detect::SirenCommand> siren;
  };

  Output process(const imu::RawSample& raw);

  void arm();
  void disarm();

  const detect::AlarmState& state() const { return state_; }
  const detect::Siren& siren() const { return siren_; }
  const imu::Mpu6050& imu() const { return imu_; }

 private:
  imu::Mpu6050 imu_;
  detect::DetectorConfig detector_;
  detect::AlarmState state_;
  detect::Siren siren_;
  // Held across samples whose orientation leaves the tilt unobservable.
  double last_theta_deg_ = 0.0;
};

struct TelemetryRow {
  std::uint64_t t_ms = 0;
  Vec3 accel_g;
  double temp_c = 0.0;
  Vec3 gyro_dps;
  double theta_y_deg = 0.0;
  detect::AlarmMode mode = detect::AlarmMode::Armed;
};

/// Header and row formatting for the telemetry CSV. Full layout:
///   t_ms,Ax,Ay,Az,T,Gx,Gy,Gz,theta_y_deg,alarm_mode
/// seven_columns keeps only Ax,Ay,Az,T,Gx,Gy,Gz.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, bool seven_columns);
  void write(const TelemetryRow& row);

 private:
  std::ostream& out_;
  bool seven_columns_;
};

struct SimSummary {
  std::size_t samples = 0;
  std::vector<detect::AlarmEvent> alarms;

  std::optional<std::uint64_t> first_alarm_ms() const {
    if (alarms.empty()) return std::nullopt;
    return alarms.front().t_ms;
  }
};

/// Runs a scenario through Monitor. When csv is non-null every sample is
/// written as a TelemetryRow.
SimSummary run_simulation(const Scenario& sc, const imu::SensorConfig& sensor,
                          const detect::DetectorConfig& detector, CsvWriter* csv = nullptr);

std::string format_summary(const SimSummary& s);

}  // namespace sentinel::sim
