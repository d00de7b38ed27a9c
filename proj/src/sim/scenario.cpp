#include "sentinel/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sentinel::sim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

Vec3 gravity_at(double theta_deg) {
  const double r = theta_deg * kDegToRad;
  return {std::sin(r), 0.0, std::cos(r)};
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Quiet: return "quiet";
    case ScenarioKind::DoorOpen: return "door-open";
    case ScenarioKind::GasCutter: return "gas-cutter";
    case ScenarioKind::Wind: return "wind";
    case ScenarioKind::KnockDown: return "knock-down";
  }
  return "?";
}

ScenarioKind parse_kind(std::string_view name) {
  for (auto k : {ScenarioKind::Quiet, ScenarioKind::DoorOpen, ScenarioKind::GasCutter, ScenarioKind::Wind,
                 ScenarioKind::KnockDown}) {
    if (name == to_string(k)) {
      return k;
    }
  }
  throw ConfigError("unknown scenario kind '" + std::string(name) + "'");
}

void Scenario::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ConfigError(what);
    }
  };
  require(duration_s > 0.0, "duration_s must be positive");
  require(params.sweep_rate_dps > 0.0, "sweep_rate_dps must be positive");
  require(params.ramp_rate_cps > 0.0, "ramp_rate_cps must be positive");
  require(params.jitter_amplitude_deg >= 0.0 && params.jitter_amplitude_deg <= 15.0,
          "jitter_amplitude_deg must be within [0, 15]");
  require(params.wind_freq_hz > 0.0, "wind_freq_hz must be positive");
  require(params.impulse_g >= 2.0, "impulse_g must be at least 2");
  require(params.impulse_at_s >= 0.0, "impulse_at_s must be non-negative");
  require(params.noise_scale >= 0.0, "noise_scale must be non-negative");
  require(params.peak_temp_c >= params.ambient_c, "peak_temp_c must not be below ambient_c");
}

Scenario scenario_from_key_values(const KeyValues& kv, std::uint32_t* period_ms) {
  Scenario sc;
  auto& p = sc.params;
  for (const auto& [key, value] : kv) {
    if (key == "kind") sc.kind = parse_kind(value);
    else if (key == "duration_s") sc.duration_s = parse_double(key, value);
    else if (key == "seed") sc.seed = parse_uint(key, value);
    else if (key == "sweep_rate_dps") p.sweep_rate_dps = parse_double(key, value);
    else if (key == "open_angle_deg") p.open_angle_deg = parse_double(key, value);
    else if (key == "ramp_rate_cps") p.ramp_rate_cps = parse_double(key, value);
    else if (key == "ambient_c") p.ambient_c = parse_double(key, value);
    else if (key == "peak_temp_c") p.peak_temp_c = parse_double(key, value);
    else if (key == "jitter_amplitude_deg") p.jitter_amplitude_deg = parse_double(key, value);
    else if (key == "wind_freq_hz") p.wind_freq_hz = parse_double(key, value);
    else if (key == "impulse_g") p.impulse_g = parse_double(key, value);
    else if (key == "impulse_at_s") p.impulse_at_s = parse_double(key, value);
    else if (key == "noise_scale") p.noise_scale = parse_double(key, value);
    else if (key == "sample_period_ms") {
      const auto v = parse_uint(key, value);
      if (v == 0 || v > 60'000) {
        throw ConfigError("sample_period_ms must be within [1, 60000]");
      }
      if (period_ms) *period_ms = static_cast<std::uint32_t>(v);
    } else {
      throw ConfigError("unknown scenario key '" + key + "'");
    }
  }
  if (!kv.contains("kind")) {
    throw ConfigError("scenario config needs a 'kind'");
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path, std::uint32_t* period_ms) {
  return scenario_from_key_values(load_key_values(path), period_ms);
}

std::int16_t quantize(double value, double counts_per_unit) {
  const double c = std::nearbyint(value * counts_per_unit);
  return static_cast<std::int16_t>(std::clamp(c, -32768.0, 32767.0));
}

std::int16_t quantize_temp(double temp_c) {
  return quantize(temp_c - imu::kTempOffsetC, imu::kTempCountsPerDegree);
}

ScenarioGenerator::ScenarioGenerator(Scenario scenario, imu::SensorConfig config)
    : scenario_(scenario), config_(config), rng_(scenario.seed) {
  scenario_.validate();
  if (config_.sample_period_ms == 0) {
    throw ConfigError("sample period must be positive");
  }
  total_ = static_cast<std::size_t>(
      std::floor(scenario_.duration_s * 1000.0 / static_cast<double>(config_.sample_period_ms) + 1e-9));
}

Truth ScenarioGenerator::truth(std::size_t k) const {
  const auto& p = scenario_.params;
  const double t = static_cast<double>(k) * config_.sample_period_ms / 1000.0;
  Truth tr;
  tr.temp_c = p.ambient_c;

  switch (scenario_.kind) {
    case ScenarioKind::Quiet:
      break;
    case ScenarioKind::DoorOpen: {
      const double swept = p.sweep_rate_dps * t;
      tr.theta_deg = std::min(swept, p.open_angle_deg);
      tr.gyro_dps.y = swept < p.open_angle_deg ? p.sweep_rate_dps : 0.0;
      break;
    }
    case ScenarioKind::GasCutter:
      tr.temp_c = std::min(p.ambient_c + p.ramp_rate_cps * t, p.peak_temp_c);
      break;
    case ScenarioKind::Wind: {
      const double w = 2.0 * std::numbers::pi * p.wind_freq_hz;
      tr.theta_deg = p.jitter_amplitude_deg * std::sin(w * t);
      tr.gyro_dps.y = p.jitter_amplitude_deg * w * std::cos(w * t);
      break;
    }
    case ScenarioKind::KnockDown: {
      const auto hit = static_cast<std::size_t>(
          std::llround(p.impulse_at_s * 1000.0 / static_cast<double>(config_.sample_period_ms)));
      if (k == hit) {
        // Impulse shared between x and z so each channel stays within the
        // +-2g range.
        const double c = p.impulse_g / std::numbers::sqrt2;
        tr.accel_g = {c, 0.0, c};
        tr.theta_deg = 45.0;
        return tr;
      }
      tr.theta_deg = k > hit ? p.open_angle_deg : 0.0;
      break;
    }
  }
  tr.accel_g = gravity_at(tr.theta_deg);
  return tr;
}

std::optional<imu::RawSample> ScenarioGenerator::next() {
  if (done()) {
    return std::nullopt;
  }
  const Truth tr = truth(index_);
  const double ns = scenario_.params.noise_scale;
  // Seven draws per sample in channel order, whether or not noise is on.
  auto jitter = [&](double sigma) { return unit_normal_(rng_) * sigma * ns; };
  const double as = imu::accel_scale(config_.accel_fs);
  const double gs = imu::gyro_scale(config_.gyro_fs);

  imu::RawSample s;
  s.ax = quantize(tr.accel_g.x + jitter(ScenarioParams::kAccelSigmaG), as);
  s.ay = quantize(tr.accel_g.y + jitter(ScenarioParams::kAccelSigmaG), as);
  s.az = quantize(tr.accel_g.z + jitter(ScenarioParams::kAccelSigmaG), as);
  s.temp_raw = quantize_temp(tr.temp_c + jitter(ScenarioParams::kTempSigmaC));
  s.gx = quantize(tr.gyro_dps.x + jitter(ScenarioParams::kGyroSigmaDps), gs);
  s.gy = quantize(tr.gyro_dps.y + jitter(ScenarioParams::kGyroSigmaDps), gs);
  s.gz = quantize(tr.gyro_dps.z + jitter(ScenarioParams::kGyroSigmaDps), gs);
  s.t_ms = static_cast<std::uint64_t>(index_) * config_.sample_period_ms;
  ++index_;
  return s;
}

std::vector<imu::RawSample> generate(const Scenario& sc, const imu::SensorConfig& cfg) {
  ScenarioGenerator gen(sc, cfg);
  std::vector<imu::RawSample> out;
  out.reserve(gen.size());
  while (auto s = gen.next()) {
    out.push_back(*s);
  }
  return out;
}

}  // namespace sentinel::sim
