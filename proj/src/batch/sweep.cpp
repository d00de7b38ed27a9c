#include "sentinel/batch/sweep.hpp"

#include <stdexcept>

#include <omp.h>

#include "sentinel/sim/monitor.hpp"

namespace sentinel::batch {

namespace {

RunOutcome run_one(const sim::Scenario& sc, const imu::SensorConfig& sensor, const detect::DetectorConfig& detector) {
  sim::ScenarioGenerator gen(sc, sensor);
  sim::Monitor monitor(sensor, detector);
  RunOutcome r;
  while (auto raw = gen.next()) {
    auto out = monitor.process(*raw);
    ++r.samples;
    if (out.event) {
      if (r.alarms == 0) {
        r.first_kind = out.event->kind;
        r.first_alarm_ms = out.event->t_ms;
      }
      ++r.alarms;
    }
  }
  return r;
}

void check_sizes(std::size_t in, std::size_t out) {
  if (in != out) {
    throw std::invalid_argument("convert_all: output span size differs from input");
  }
}

}  // namespace

std::vector<RunOutcome> run_scenarios(std::span<const sim::Scenario> scenarios, const imu::SensorConfig& sensor,
                                      const detect::DetectorConfig& detector) {
  detector.validate();
  for (const auto& sc : scenarios) {
    sc.validate();
  }
  std::vector<RunOutcome> out(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_one(scenarios[static_cast<std::size_t>(i)], sensor, detector);
  }
  return out;
}

std::vector<RunOutcome> run_scenarios_serial(std::span<const sim::Scenario> scenarios,
                                             const imu::SensorConfig& sensor,
                                             const detect::DetectorConfig& detector) {
  std::vector<RunOutcome> out;
  out.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    out.push_back(run_one(sc, sensor, detector));
  }
  return out;
}

void convert_all(std::span<const imu::RawSample> in, const imu::SensorConfig& cfg, std::span<PhysicalSample> out) {
  check_sizes(in.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = imu::convert(in[static_cast<std::size_t>(i)], cfg);
  }
}

void convert_all_serial(std::span<const imu::RawSample> in, const imu::SensorConfig& cfg,
                        std::span<PhysicalSample> out) {
  check_sizes(in.size(), out.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = imu::convert(in[i], cfg);
  }
}

int worker_threads() { return omp_get_max_threads(); }

}  // namespace sentinel::batch
