#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "sentinel/imu/types.hpp"
#include "sentinel/physical.hpp"

namespace sentinel::imu {

class AddressError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

namespace reg {
constexpr std::uint8_t kSmplrtDiv = 0x19;
constexpr std::uint8_t kGyroConfig = 0x1B;
constexpr std::uint8_t kAccelConfig = 0x1C;
constexpr std::uint8_t kIntStatus = 0x3A;
constexpr std::uint8_t kAccelXoutH = 0x3B;
constexpr std::uint8_t kTempOutH = 0x41;
constexpr std::uint8_t kGyroXoutH = 0x43;
constexpr std::uint8_t kGyroZoutL = 0x48;
constexpr std::uint8_t kUserCtrl = 0x6A;
constexpr std::uint8_t kFifoCountH = 0x72;
constexpr std::uint8_t kFifoCountL = 0x73;
constexpr std::uint8_t kWhoAmI = 0x75;

constexpr std::uint8_t kWhoAmIValue = 0x68;
constexpr std::uint8_t kUserCtrlFifoEn = 0x40;
constexpr std::uint8_t kUserCtrlFifoReset = 0x04;
constexpr std::uint8_t kIntFifoOverflow = 0x10;
}  // namespace reg

constexpr std::size_t kBurstBytes = 14;
constexpr std::size_t kFifoCapacity = board::kFifoBytes;

/// Register-level MPU-6050 model. Reads are instantaneous; the bus clock is
/// not simulated.
///
/// A single caller drives an instance at a time. There is no internal
/// locking.
class Mpu6050 {
 public:
  explicit Mpu6050(SensorConfig config = {});

  /// Latch a new sample into the data registers and, when enabled, append
  /// a 14-byte burst to the FIFO. A burst that does not fit is dropped and
  /// the sticky overflow flag is raised.
  void inject_sample(const RawSample& s);

  /// Burst read with address auto-increment. Throws AddressError when
  /// addr + n - 1 exceeds 0xFF.
  std::vector<std::uint8_t> bus_read(std::uint8_t addr, std::size_t n) const;

  /// Single register write. GYRO_CONFIG, ACCEL_CONFIG and USER_CTRL update
  /// the active configuration; other writable registers are stored as-is.
  /// Data registers and WHO_AM_I are read-only and throw AddressError.
  void bus_write(std::uint8_t addr, std::uint8_t value);

  /// Pop up to n bytes from the FIFO, oldest first.
  std::vector<std::uint8_t> fifo_read(std::size_t n);
  std::size_t fifo_count() const { return fifo_.size(); }
  bool fifo_overflow() const { return fifo_overflow_; }
  /// Empties the FIFO and clears the overflow flag.
  void fifo_reset();

  const SensorConfig& config() const { return config_; }
  void set_config(const SensorConfig& config);

 private:
  void sync_config_registers();

  SensorConfig config_;
  std::array<std::uint8_t, 256> regs_{};
  std::deque<std::uint8_t> fifo_;
  bool fifo_overflow_ = false;
};

/// Big-endian 14-byte encoding of the seven channels.
std::array<std::uint8_t, kBurstBytes> encode_burst(const RawSample& s);

/// Inverse of encode_burst; t_ms is taken from the argument.
RawSample decode_burst(std::span<const std::uint8_t, kBurstBytes> bytes, std::uint64_t t_ms = 0);

/// Counts to physical units. theta_y_deg is derived from the converted
/// acceleration; on a degenerate orientation it is 0 and tilt_valid is false.
PhysicalSample convert(const RawSample& s, const SensorConfig& c);

constexpr double temp_from_raw(std::int16_t raw) {
  return static_cast<double>(raw) / kTempCountsPerDegree + kTempOffsetC;
}

}  // namespace sentinel::imu
