#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sentinel/detect/engine.hpp"
#include "sentinel/imu/mpu6050.hpp"
#include "sentinel/sim/scenario.hpp"

namespace sentinel::batch {

struct RunOutcome {
  std::size_t samples = 0;
  std::size_t alarms = 0;
  std::optional<detect::AlarmKind> first_kind;
  std::optional<std::uint64_t> first_alarm_ms;

  friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

// Each pair runs its scenarios independently; the parallel kernel
// distributes scenarios over OpenMP threads and the serial one is the
// reference it is tested against.

std::vector<RunOutcome> run_scenarios(std::span<const sim::Scenario> scenarios, const imu::SensorConfig& sensor,
                                      const detect::DetectorConfig& detector);
std::vector<RunOutcome> run_scenarios_serial(std::span<const sim::Scenario> scenarios,
                                             const imu::SensorConfig& sensor,
                                             const detect::DetectorConfig& detector);

/// out.size() must equal in.size().
void convert_all(std::span<const imu::RawSample> in, const imu::SensorConfig& cfg, std::span<PhysicalSample> out);
void convert_all_serial(std::span<const imu::RawSample> in, const imu::SensorConfig& cfg,
                        std::span<PhysicalSample> out);

/// Number of worker threads the parallel kernels will use.
int worker_threads();

}  // namespace sentinel::batch
