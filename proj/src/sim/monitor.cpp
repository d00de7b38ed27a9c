#include "sentinel/sim/monitor.hpp"

#include <cstdio>

namespace sentinel::sim {

Monitor::Monitor(imu::SensorConfig sensor, detect::DetectorConfig detector)
    : imu_(sensor), detector_(detector) {
  detector_.validate();
  state_ = detect::AlarmState::initial(detector_);
}

Monitor::Output Monitor::process(const imu::RawSample& raw) {
  imu_.inject_sample(raw);
  const auto bytes = imu_.bus_read(imu::reg::kAccelXoutH, imu::kBurstBytes);
  const auto decoded =
      imu::decode_burst(std::span<const std::uint8_t, imu::kBurstBytes>(bytes.data(), imu::kBurstBytes), raw.t_ms);

  Output out;
  out.sample = imu::convert(decoded, imu_.config());
  if (out.sample.tilt_valid) {
    last_theta_deg_ = out.sample.theta_y_deg;
  } else {
    out.sample.theta_y_deg = last_theta_deg_;
  }
  auto r = detect::step(state_, out.sample, detector_);
  state_ = r.state;
  if (r.siren) {
    siren_.apply(*r.siren);
  }
  out.event = std::move(r.event);
  out.siren = r.siren;
  return out;
}

void Monitor::arm() {
  state_ = detect::arm(state_);
  siren_.apply(detect::SirenCommand::Off);
}

void Monitor::disarm() {
  state_ = detect::disarm(state_);
  siren_.apply(detect::SirenCommand::Off);
}

CsvWriter::CsvWriter(std::ostream& out, bool seven_columns) : out_(out), seven_columns_(seven_columns) {
  out_ << (seven_columns_ ? "Ax,Ay,Az,T,Gx,Gy,Gz\n" : "t_ms,Ax,Ay,Az,T,Gx,Gy,Gz,theta_y_deg,alarm_mode\n");
}

void CsvWriter::write(const TelemetryRow& r) {
  char buf[256];
  int n = 0;
  if (seven_columns_) {
    n = std::snprintf(buf, sizeof buf, "%.5f,%.5f,%.5f,%.3f,%.3f,%.3f,%.3f\n", r.accel_g.x, r.accel_g.y,
                      r.accel_g.z, r.temp_c, r.gyro_dps.x, r.gyro_dps.y, r.gyro_dps.z);
  } else {
    n = std::snprintf(buf, sizeof buf, "%llu,%.5f,%.5f,%.5f,%.3f,%.3f,%.3f,%.3f,%.3f,%u\n",
                      static_cast<unsigned long long>(r.t_ms), r.accel_g.x, r.accel_g.y, r.accel_g.z, r.temp_c,
                      r.gyro_dps.x, r.gyro_dps.y, r.gyro_dps.z, r.theta_y_deg, static_cast<unsigned>(r.mode));
  }
  out_.write(buf, n);
}

SimSummary run_simulation(const Scenario& sc, const imu::SensorConfig& sensor,
                          const detect::DetectorConfig& detector, CsvWriter* csv) {
  ScenarioGenerator gen(sc, sensor);
  Monitor monitor(sensor, detector);
  SimSummary summary;
  while (auto raw = gen.next()) {
    auto out = monitor.process(*raw);
    ++summary.samples;
    if (csv) {
      csv->write({out.sample.t_ms, out.sample.accel_g, out.sample.temp_c, out.sample.gyro_dps,
                  out.sample.theta_y_deg, monitor.state().mode});
    }
    if (out.event) {
      summary.alarms.push_back(std::move(*out.event));
    }
  }
  return summary;
}

std::string format_summary(const SimSummary& s) {
  std::string out = "samples: " + std::to_string(s.samples) + "\nalarms: " + std::to_string(s.alarms.size()) + "\n";
  if (!s.alarms.empty()) {
    const auto& a = s.alarms.front();
    char buf[160];
    std::snprintf(buf, sizeof buf, "first_alarm: %s at %.3f s (%s)\n",
                  a.kind == detect::AlarmKind::Tilt ? "tilt" : "temp", static_cast<double>(a.t_ms) / 1000.0,
                  a.message.c_str());
    out += buf;
  } else {
    out += "first_alarm: none\n";
  }
  return out;
}

}  // namespace sentinel::sim
