#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sentinel/sim/monitor.hpp"
#include "sentinel/sim/scenario.hpp"

using namespace sentinel;
using namespace sentinel::sim;

namespace {

Scenario make(ScenarioKind kind, double duration, std::uint64_t seed = 1) {
  Scenario s;
  s.kind = kind;
  s.duration_s = duration;
  s.seed = seed;
  return s;
}

double theta_of(const imu::RawSample& r) {
  return convert(r, imu::SensorConfig{}).theta_y_deg;
}

// First sample time (s) where the analytic signal exceeds the threshold.
template <class F>
double first_crossing(const ScenarioGenerator& g, F value, double threshold) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (value(g.truth(k)) > threshold) return static_cast<double>(k) * g.config().sample_period_ms / 1000.0;
  }
  return -1;
}

}  // namespace

TEST_CASE("sample count and timestamps follow duration and period") {
  const auto v = generate(make(ScenarioKind::Quiet, 10.0), {});
  REQUIRE(v.size() == 100);
  CHECK(v[0].t_ms == 0);
  CHECK(v[99].t_ms == 9900);

  imu::SensorConfig fast;
  fast.sample_period_ms = 20;
  CHECK(generate(make(ScenarioKind::Quiet, 1.0), fast).size() == 50);
}

TEST_CASE("equal seeds give identical streams, different seeds differ") {
  for (auto kind : {ScenarioKind::Quiet, ScenarioKind::DoorOpen, ScenarioKind::GasCutter, ScenarioKind::Wind,
                    ScenarioKind::KnockDown}) {
    const auto a = generate(make(kind, 5.0, 99), {});
    const auto b = generate(make(kind, 5.0, 99), {});
    const auto c = generate(make(kind, 5.0, 100), {});
    CHECK(a == b);
    CHECK(a != c);
  }
}

TEST_CASE("quiet stays level") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (const auto& r : generate(make(ScenarioKind::Quiet, 10.0, seed), {})) {
      CHECK(std::fabs(theta_of(r)) < 5.0);
      CHECK(std::fabs(imu::temp_from_raw(r.temp_raw) - 25.0) < 1.0);
    }
  }
}

TEST_CASE("door-open crosses 60 degrees at 2.0 s") {
  ScenarioGenerator g(make(ScenarioKind::DoorOpen, 10.0), {});
  const double t = first_crossing(g, [](const Truth& tr) { return tr.theta_deg; }, 60.0);
  CHECK(std::fabs(t - 2.0) <= 0.1 + 1e-9);
  CHECK(g.truth(99).theta_deg == doctest::Approx(90.0));
  CHECK(g.truth(10).gyro_dps.y == 30.0);
  CHECK(g.truth(50).gyro_dps.y == 0.0);
}

TEST_CASE("gas-cutter crosses 60 C at 17.5 s and saturates at the peak") {
  ScenarioGenerator g(make(ScenarioKind::GasCutter, 60.0), {});
  const double t = first_crossing(g, [](const Truth& tr) { return tr.temp_c; }, 60.0);
  CHECK(std::fabs(t - 17.5) <= 0.1 + 1e-9);
  CHECK(g.truth(599).temp_c == 120.0);
  CHECK(g.truth(0).temp_c == 25.0);
}

TEST_CASE("wind stays inside its amplitude") {
  auto sc = make(ScenarioKind::Wind, 60.0, 3);
  ScenarioGenerator g(sc, {});
  double peak = 0;
  for (std::size_t k = 0; k < g.size(); ++k) peak = std::max(peak, std::fabs(g.truth(k).theta_deg));
  CHECK(peak <= 10.0 + 1e-12);
  CHECK(peak > 9.0);

  sc.params.jitter_amplitude_deg = 16.0;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
}

TEST_CASE("knock-down impulse then settled open") {
  const auto v = generate(make(ScenarioKind::KnockDown, 3.0), {});
  REQUIRE(v.size() == 30);
  const auto hit = convert(v[10], imu::SensorConfig{});
  const double mag = std::sqrt(hit.accel_g.x * hit.accel_g.x + hit.accel_g.y * hit.accel_g.y +
                               hit.accel_g.z * hit.accel_g.z);
  CHECK(mag >= 2.0 - 0.05);
  CHECK(std::fabs(theta_of(v[20]) - 90.0) < 5.0);
  CHECK(std::fabs(theta_of(v[5])) < 5.0);

  auto sc = make(ScenarioKind::KnockDown, 3.0);
  sc.params.impulse_g = 1.5;
  CHECK_THROWS_AS(sc.validate(), ConfigError);
}

TEST_CASE("property: noise-free samples sit on the unit sphere within quantization") {
  for (auto kind : {ScenarioKind::Quiet, ScenarioKind::DoorOpen, ScenarioKind::GasCutter, ScenarioKind::Wind}) {
    for (auto fs : {imu::AccelRange::G2, imu::AccelRange::G4, imu::AccelRange::G8, imu::AccelRange::G16}) {
      auto sc = make(kind, 20.0, 5);
      sc.params.noise_scale = 0.0;
      imu::SensorConfig cfg;
      cfg.accel_fs = fs;
      ScenarioGenerator g(sc, cfg);
      const double lsb = 1.0 / imu::accel_scale(fs);
      std::size_t k = 0;
      while (auto r = g.next()) {
        const auto tr = g.truth(k++);
        const auto p = convert(*r, cfg);
        CHECK(std::fabs(p.accel_g.x - tr.accel_g.x) <= lsb / 2 + 1e-12);
        CHECK(std::fabs(p.accel_g.z - tr.accel_g.z) <= lsb / 2 + 1e-12);
        const double mag = std::sqrt(p.accel_g.x * p.accel_g.x + p.accel_g.y * p.accel_g.y +
                                     p.accel_g.z * p.accel_g.z);
        CHECK(std::fabs(mag - 1.0) <= 2 * lsb);
        CHECK(std::fabs(p.temp_c - tr.temp_c) <= 0.5 / 340.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("quantization saturates") {
  CHECK(quantize(10.0, 16384) == 32767);
  CHECK(quantize(-10.0, 16384) == -32768);
  CHECK(quantize(0.5 / 16384, 16384) == 0);
  CHECK(quantize(1.0, 16384) == 16384);
  CHECK(quantize_temp(36.53) == 0);
}

TEST_CASE("noise statistics match the configured sigmas") {
  // Large sample from the quiet scenario: residual spread per channel.
  auto sc = make(ScenarioKind::Quiet, 2000.0, 42);
  ScenarioGenerator g(sc, {});
  double sx = 0, sxx = 0, st = 0, stt = 0;
  std::size_t n = 0;
  while (auto r = g.next()) {
    const double ax = r->ax / 16384.0;
    const double t = imu::temp_from_raw(r->temp_raw) - 25.0;
    sx += ax;
    sxx += ax * ax;
    st += t;
    stt += t * t;
    ++n;
  }
  const double sd_a = std::sqrt(sxx / n - (sx / n) * (sx / n));
  const double sd_t = std::sqrt(stt / n - (st / n) * (st / n));
  CHECK(sd_a == doctest::Approx(0.01).epsilon(0.05));
  CHECK(sd_t == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("scenario key-value files") {
  std::istringstream in(
      "# door test\n"
      "kind = door-open\n"
      "duration_s = 12.5\n"
      "seed = 7\n"
      "sweep_rate_dps = 45\n"
      "sample_period_ms = 50\n");
  std::uint32_t period = 100;
  const auto sc = scenario_from_key_values(parse_key_values(in), &period);
  CHECK(sc.kind == ScenarioKind::DoorOpen);
  CHECK(sc.duration_s == 12.5);
  CHECK(sc.seed == 7);
  CHECK(sc.params.sweep_rate_dps == 45.0);
  CHECK(period == 50);

  std::istringstream bad_kind("kind = earthquake\n");
  CHECK_THROWS_AS(scenario_from_key_values(parse_key_values(bad_kind)), ConfigError);
  std::istringstream unknown("kind = quiet\nfoo = 1\n");
  CHECK_THROWS_AS(scenario_from_key_values(parse_key_values(unknown)), ConfigError);
  std::istringstream missing("duration_s = 3\n");
  CHECK_THROWS_AS(scenario_from_key_values(parse_key_values(missing)), ConfigError);
  std::istringstream dup("kind = quiet\nkind = wind\n");
  CHECK_THROWS_AS(parse_key_values(dup), ConfigError);
  std::istringstream noeq("kind quiet\n");
  CHECK_THROWS_AS(parse_key_values(noeq), ConfigError);
  std::istringstream badnum("kind = quiet\nduration_s = ten\n");
  CHECK_THROWS_AS(scenario_from_key_values(parse_key_values(badnum)), ConfigError);

  for (auto k : {ScenarioKind::Quiet, ScenarioKind::DoorOpen, ScenarioKind::GasCutter, ScenarioKind::Wind,
                 ScenarioKind::KnockDown}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
}

TEST_CASE("monitor reads through the bus and holds the last valid tilt") {
  Monitor m(imu::SensorConfig{}, detect::DetectorConfig{});
  imu::RawSample tilted{13377, 0, 9459, 0, 0, 0, 0, 0};  // about 54.7 degrees
  auto o = m.process(tilted);
  CHECK(o.sample.theta_y_deg == doctest::Approx(std::atan2(13377.0, 9459.0) * 180 / M_PI));
  imu::RawSample sideways{0, 16384, 0, 0, 0, 0, 0, 100};
  o = m.process(sideways);
  CHECK_FALSE(o.sample.tilt_valid);
  CHECK(o.sample.theta_y_deg == doctest::Approx(std::atan2(13377.0, 9459.0) * 180 / M_PI));
  CHECK(m.imu().bus_read(0x3B, 2) == std::vector<std::uint8_t>{0x00, 0x00});
}

TEST_CASE("simulation summary and CSV layout") {
  const auto sc = make(ScenarioKind::DoorOpen, 5.0, 42);
  std::ostringstream full, seven;
  CsvWriter a(full, false), b(seven, true);
  const auto s1 = run_simulation(sc, {}, {}, &a);
  run_simulation(sc, {}, {}, &b);
  CHECK(s1.samples == 50);
  REQUIRE(s1.alarms.size() == 1);
  CHECK(s1.alarms[0].kind == detect::AlarmKind::Tilt);

  std::istringstream lines(full.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "t_ms,Ax,Ay,Az,T,Gx,Gy,Gz,theta_y_deg,alarm_mode");
  CHECK(std::count(row.begin(), row.end(), ',') == 9);
  CHECK(row.rfind("0,", 0) == 0);
  CHECK(row.back() == '1');

  std::istringstream lines7(seven.str());
  std::getline(lines7, header);
  std::getline(lines7, row);
  CHECK(header == "Ax,Ay,Az,T,Gx,Gy,Gz");
  CHECK(std::count(row.begin(), row.end(), ',') == 6);
  const auto seven_text = seven.str();
  CHECK(std::count(seven_text.begin(), seven_text.end(), '\n') == 51);

  CHECK(format_summary(s1).find("tilt") != std::string::npos);
}
