#pragma once

#include <array>
#include <cstdint>

namespace sentinel::imu {

/// One IMU reading as the device's 16-bit ADC counts.
struct RawSample {
  std::int16_t ax = 0;
  std::int16_t ay = 0;
  std::int16_t az = 0;
  std::int16_t temp_raw = 0;
  std::int16_t gx = 0;
  std::int16_t gy = 0;
  std::int16_t gz = 0;
  std::uint64_t t_ms = 0;

  /// Channels in burst-read order: ax, ay, az, temp, gx, gy, gz.
  std::array<std::int16_t, 7> channels() const { return {ax, ay, az, temp_raw, gx, gy, gz}; }

  friend bool operator==(const RawSample&, const RawSample&) = default;
};

enum class AccelRange : std::uint8_t { G2 = 0, G4 = 1, G8 = 2, G16 = 3 };
enum class GyroRange : std::uint8_t { Dps250 = 0, Dps500 = 1, Dps1000 = 2, Dps2000 = 3 };

/// Counts per g. 16384 at +-2g, halving per range step.
constexpr double accel_scale(AccelRange r) {
  return 16384.0 / static_cast<double>(1u << static_cast<unsigned>(r));
}

/// Counts per deg/s. 131 at +-250 deg/s, halving per range step.
constexpr double gyro_scale(GyroRange r) {
  return 131.0 / static_cast<double>(1u << static_cast<unsigned>(r));
}

constexpr double kTempCountsPerDegree = 340.0;
constexpr double kTempOffsetC = 36.53;
constexpr double kTempMinC = -40.0;
constexpr double kTempMaxC = 85.0;

struct SensorConfig {
  AccelRange accel_fs = AccelRange::G2;
  GyroRange gyro_fs = GyroRange::Dps250;
  bool fifo_enabled = false;
  std::uint32_t sample_period_ms = 100;
};

// Physical attributes of the GY-521 board. Informational only.
namespace board {
constexpr double kGyroOperatingCurrentMa = 3.6;
constexpr double kSupplyMinV = 2.375;
constexpr double kSupplyMaxV = 3.46;
constexpr double kPackageMm[3] = {4.0, 4.0, 0.9};
constexpr std::uint32_t kI2cClockHz = 400'000;
constexpr std::size_t kFifoBytes = 1024;
}  // namespace board

}  // namespace sentinel::imu
