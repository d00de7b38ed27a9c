#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "sentinel/imu/types.hpp"
#include "sentinel/kv_config.hpp"
#include "sentinel/physical.hpp"

namespace sentinel::sim {

enum class ScenarioKind : std::uint8_t { Quiet, DoorOpen, GasCutter, Wind, KnockDown };

/// CLI / config spelling: quiet, door-open, gas-cutter, wind, knock-down.
std::string_view to_string(ScenarioKind k);
/// Throws ConfigError on an unknown name.
ScenarioKind parse_kind(std::string_view name);

struct ScenarioParams {
  double sweep_rate_dps = 30.0;    // DoorOpen
  double open_angle_deg = 90.0;    // DoorOpen, KnockDown settle angle
  double ramp_rate_cps = 2.0;      // GasCutter
  double ambient_c = 25.0;
  double peak_temp_c = 120.0;      // GasCutter
  double jitter_amplitude_deg = 10.0;  // Wind, at most 15
  double wind_freq_hz = 0.5;
  double impulse_g = 2.5;          // KnockDown, at least 2
  double impulse_at_s = 1.0;
  // Multiplies all noise sigmas; 0 yields the analytic trajectory.
  double noise_scale = 1.0;

  constexpr static double kAccelSigmaG = 0.01;
  constexpr static double kGyroSigmaDps = 0.1;
  constexpr static double kTempSigmaC = 0.1;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Quiet;
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  ScenarioParams params;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Reads the Scenario and ScenarioParams fields by name.
/// A `sample_period_ms` key, when present, is stored in *period_ms.
Scenario scenario_from_key_values(const KeyValues& kv, std::uint32_t* period_ms = nullptr);
Scenario load_scenario(const std::filesystem::path& path, std::uint32_t* period_ms = nullptr);

/// Noise-free physical state at a sample instant.
struct Truth {
  Vec3 accel_g;
  Vec3 gyro_dps;
  double temp_c = 0.0;
  double theta_deg = 0.0;
};

/// Saturating quantization to device counts.
std::int16_t quantize(double value, double counts_per_unit);
std::int16_t quantize_temp(double temp_c);

/// Iterator-style producer of RawSamples. Equal (scenario, config) pairs
/// produce identical streams.
class ScenarioGenerator {
 public:
  ScenarioGenerator(Scenario scenario, imu::SensorConfig config);

  std::size_t size() const { return total_; }
  std::size_t position() const { return index_; }
  bool done() const { return index_ >= total_; }

  std::optional<imu::RawSample> next();

  /// Analytic trajectory at sample index k.
  Truth truth(std::size_t k) const;

  const Scenario& scenario() const { return scenario_; }
  const imu::SensorConfig& config() const { return config_; }

 private:
  Scenario scenario_;
  imu::SensorConfig config_;
  std::size_t total_ = 0;
  std::size_t index_ = 0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};
};

std::vector<imu::RawSample> generate(const Scenario& sc, const imu::SensorConfig& cfg);

}  // namespace sentinel::sim
