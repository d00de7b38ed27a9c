#include "sentinel/imu/mpu6050.hpp"

#include <algorithm>
#include <string>

namespace sentinel::imu {

namespace {

constexpr std::uint8_t range_bits(std::uint8_t reg_value) { return (reg_value >> 3) & 0x03; }

bool is_read_only(std::uint8_t addr) {
  return (addr >= reg::kIntStatus && addr <= reg::kGyroZoutL) || addr == reg::kWhoAmI ||
         addr == reg::kFifoCountH || addr == reg::kFifoCountL;
}

}  // namespace

Mpu6050::Mpu6050(SensorConfig config) : config_(config) {
  regs_[reg::kWhoAmI] = reg::kWhoAmIValue;
  sync_config_registers();
}

void Mpu6050::set_config(const SensorConfig& config) {
  config_ = config;
  sync_config_registers();
}

void Mpu6050::sync_config_registers() {
  regs_[reg::kGyroConfig] = static_cast<std::uint8_t>(static_cast<unsigned>(config_.gyro_fs) << 3);
  regs_[reg::kAccelConfig] = static_cast<std::uint8_t>(static_cast<unsigned>(config_.accel_fs) << 3);
  if (config_.fifo_enabled) {
    regs_[reg::kUserCtrl] |= reg::kUserCtrlFifoEn;
  } else {
    regs_[reg::kUserCtrl] &= static_cast<std::uint8_t>(~reg::kUserCtrlFifoEn);
  }
}

void Mpu6050::inject_sample(const RawSample& s) {
  const auto burst = encode_burst(s);
  std::copy(burst.begin(), burst.end(), regs_.begin() + reg::kAccelXoutH);
  if (!config_.fifo_enabled) {
    return;
  }
  if (fifo_.size() + kBurstBytes > kFifoCapacity) {
    fifo_overflow_ = true;
    return;
  }
  fifo_.insert(fifo_.end(), burst.begin(), burst.end());
}

std::vector<std::uint8_t> Mpu6050::bus_read(std::uint8_t addr, std::size_t n) const {
  if (n == 0 || static_cast<std::size_t>(addr) + n - 1 > 0xFF) {
    throw AddressError("register window [" + std::to_string(addr) + ", +" + std::to_string(n) +
                       ") is empty or exceeds 0xFF");
  }
  std::vector<std::uint8_t> out(regs_.begin() + addr, regs_.begin() + addr + n);
  const auto count = static_cast<std::uint16_t>(fifo_.size());
  for (std::size_t i = 0; i < n; ++i) {
    switch (addr + i) {
      case reg::kFifoCountH: out[i] = static_cast<std::uint8_t>(count >> 8); break;
      case reg::kFifoCountL: out[i] = static_cast<std::uint8_t>(count & 0xFF); break;
      case reg::kIntStatus: out[i] = fifo_overflow_ ? reg::kIntFifoOverflow : 0; break;
      default: break;
    }
  }
  return out;
}

void Mpu6050::bus_write(std::uint8_t addr, std::uint8_t value) {
  if (is_read_only(addr)) {
    throw AddressError("register is read-only");
  }
  switch (addr) {
    case reg::kGyroConfig:
      config_.gyro_fs = static_cast<GyroRange>(range_bits(value));
      regs_[addr] = value;
      break;
    case reg::kAccelConfig:
      config_.accel_fs = static_cast<AccelRange>(range_bits(value));
      regs_[addr] = value;
      break;
    case reg::kUserCtrl:
      config_.fifo_enabled = (value & reg::kUserCtrlFifoEn) != 0;
      if (value & reg::kUserCtrlFifoReset) {
        fifo_reset();
      }
      // FIFO_RESET self-clears.
      regs_[addr] = value & static_cast<std::uint8_t>(~reg::kUserCtrlFifoReset);
      break;
    default:
      regs_[addr] = value;
      break;
  }
}

std::vector<std::uint8_t> Mpu6050::fifo_read(std::size_t n) {
  n = std::min(n, fifo_.size());
  std::vector<std::uint8_t> out(fifo_.begin(), fifo_.begin() + static_cast<std::ptrdiff_t>(n));
  fifo_.erase(fifo_.begin(), fifo_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void Mpu6050::fifo_reset() {
  fifo_.clear();
  fifo_overflow_ = false;
}

std::array<std::uint8_t, kBurstBytes> encode_burst(const RawSample& s) {
  std::array<std::uint8_t, kBurstBytes> out{};
  const auto ch = s.channels();
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const auto u = static_cast<std::uint16_t>(ch[i]);
    out[2 * i] = static_cast<std::uint8_t>(u >> 8);
    out[2 * i + 1] = static_cast<std::uint8_t>(u & 0xFF);
  }
  return out;
}

RawSample decode_burst(std::span<const std::uint8_t, kBurstBytes> bytes, std::uint64_t t_ms) {
  auto word = [&](std::size_t i) {
    return static_cast<std::int16_t>(static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]));
  };
  RawSample s;
  s.ax = word(0);
  s.ay = word(1);
  s.az = word(2);
  s.temp_raw = word(3);
  s.gx = word(4);
  s.gy = word(5);
  s.gz = word(6);
  s.t_ms = t_ms;
  return s;
}

PhysicalSample convert(const RawSample& s, const SensorConfig& c) {
  const double as = accel_scale(c.accel_fs);
  const double gs = gyro_scale(c.gyro_fs);
  PhysicalSample p;
  p.accel_g = {s.ax / as, s.ay / as, s.az / as};
  p.gyro_dps = {s.gx / gs, s.gy / gs, s.gz / gs};
  p.temp_c = temp_from_raw(s.temp_raw);
  p.t_ms = s.t_ms;
  if (auto theta = try_tilt_angle(p.accel_g)) {
    p.theta_y_deg = *theta;
  } else {
    p.theta_y_deg = 0.0;
    p.tilt_valid = false;
  }
  return p;
}

}  // namespace sentinel::imu
