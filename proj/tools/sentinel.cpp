// sentinel: scenario simulation, gateway service and simulated device.
//
// Exit codes:
//   0   clean run / clean shutdown
//   2   sim: at least one alarm fired
//   64  usage or configuration error
//   74  I/O error (unwritable output, gateway unreachable)
//   75  serve: port already in use
//   77  device: gateway rejected the token

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sentinel/device/client.hpp"
#include "sentinel/gateway/server.hpp"
#include "sentinel/sim/monitor.hpp"

namespace {

using namespace sentinel;

constexpr int kExitOk = 0;
constexpr int kExitAlarm = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;
constexpr int kExitPortInUse = 75;
constexpr int kExitAuth = 77;

struct ScenarioFlags {
  std::string kind = "quiet";
  std::string file;
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  std::optional<double> sweep_rate, ramp_rate, amplitude, impulse, noise;
  std::uint32_t period_ms = 100;
  unsigned accel_fs = 2;
  unsigned gyro_fs = 250;
  double theta_threshold = 60.0;
  double temp_threshold = 60.0;
  std::uint32_t debounce = 3;
  bool disarmed = false;

  void attach(CLI::App& app) {
    app.add_option("--scenario", kind, "quiet | door-open | gas-cutter | wind | knock-down");
    app.add_option("--scenario-file", file, "key=value scenario definition (overrides --scenario)");
    app.add_option("--duration", duration_s, "seconds")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed);
    app.add_option("--sweep-rate", sweep_rate, "door-open sweep, deg/s");
    app.add_option("--ramp-rate", ramp_rate, "gas-cutter ramp, deg C/s");
    app.add_option("--amplitude", amplitude, "wind amplitude, deg (<= 15)");
    app.add_option("--impulse", impulse, "knock-down impulse, g (>= 2)");
    app.add_option("--noise", noise, "noise scale, 0 disables");
    app.add_option("--period-ms", period_ms, "sample period")->check(CLI::Range(1u, 60000u));
    app.add_option("--accel-fs", accel_fs, "accelerometer range in g")->check(CLI::IsMember({2u, 4u, 8u, 16u}));
    app.add_option("--gyro-fs", gyro_fs, "gyro range in deg/s")->check(CLI::IsMember({250u, 500u, 1000u, 2000u}));
    app.add_option("--theta-threshold", theta_threshold, "tilt threshold, deg")->check(CLI::PositiveNumber);
    app.add_option("--temp-threshold", temp_threshold, "temperature threshold, deg C");
    app.add_option("--debounce", debounce, "consecutive samples before alarming")->check(CLI::PositiveNumber);
    app.add_flag("--disarmed", disarmed, "start disarmed");
  }

  sim::Scenario scenario() {
    sim::Scenario sc;
    if (!file.empty()) {
      std::uint32_t p = period_ms;
      sc = sim::load_scenario(file, &p);
      period_ms = p;
    } else {
      sc.kind = sim::parse_kind(kind);
      sc.duration_s = duration_s;
      sc.seed = seed;
    }
    if (sweep_rate) sc.params.sweep_rate_dps = *sweep_rate;
    if (ramp_rate) sc.params.ramp_rate_cps = *ramp_rate;
    if (amplitude) sc.params.jitter_amplitude_deg = *amplitude;
    if (impulse) sc.params.impulse_g = *impulse;
    if (noise) sc.params.noise_scale = *noise;
    sc.validate();
    return sc;
  }

  imu::SensorConfig sensor() const {
    imu::SensorConfig c;
    c.accel_fs = static_cast<imu::AccelRange>(accel_fs == 2 ? 0 : accel_fs == 4 ? 1 : accel_fs == 8 ? 2 : 3);
    c.gyro_fs = static_cast<imu::GyroRange>(gyro_fs == 250 ? 0 : gyro_fs == 500 ? 1 : gyro_fs == 1000 ? 2 : 3);
    c.sample_period_ms = period_ms;
    return c;
  }

  detect::DetectorConfig detector() const {
    detect::DetectorConfig d;
    d.theta_threshold_deg = theta_threshold;
    d.temp_threshold_c = temp_threshold;
    d.debounce_count = debounce;
    d.armed_at_start = !disarmed;
    d.validate();
    return d;
  }
};

std::string config_path_or_env(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SENTINEL_CONFIG")) return env;
  return {};
}

int run_sim(ScenarioFlags& flags, const std::string& out_path, bool seven_columns) {
  sim::Scenario sc;
  imu::SensorConfig sensor;
  detect::DetectorConfig detector;
  try {
    sc = flags.scenario();
    sensor = flags.sensor();
    detector = flags.detector();
  } catch (const std::exception& e) {
    std::cerr << "sentinel sim: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "sentinel sim: cannot write " << out_path << "\n";
      return kExitIo;
    }
    out = &file;
  }
  sim::CsvWriter csv(*out, seven_columns);
  const auto summary = sim::run_simulation(sc, sensor, detector, &csv);
  out->flush();
  if (!*out) {
    std::cerr << "sentinel sim: write failed\n";
    return kExitIo;
  }
  (out_path.empty() ? std::cerr : std::cout) << sim::format_summary(summary);
  return summary.alarms.empty() ? kExitOk : kExitAlarm;
}

int run_serve(const std::string& config_flag, std::optional<std::uint16_t> port_override) {
  const auto path = config_path_or_env(config_flag);
  if (path.empty()) {
    std::cerr << "sentinel serve: no config (use --config or SENTINEL_CONFIG)\n";
    return kExitUsage;
  }
  gateway::GatewayConfig cfg;
  try {
    cfg = gateway::GatewayConfig::load(path);
  } catch (const std::exception& e) {
    std::cerr << "sentinel serve: " << e.what() << "\n";
    return kExitUsage;
  }
  if (port_override) cfg.port = *port_override;

  try {
    gateway::Server server(cfg, gateway::Server::Options{.handle_signals = true});
    std::cout << "listening on " << cfg.bind << ":" << server.port() << std::endl;
    server.run();
    std::cout << "stopped after " << server.log().last_seq() << " records" << std::endl;
  } catch (const gateway::PortInUse& e) {
    std::cerr << "sentinel serve: " << e.what() << "\n";
    return kExitPortInUse;
  } catch (const ConfigError& e) {
    std::cerr << "sentinel serve: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "sentinel serve: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

device::DeviceClient* g_device = nullptr;

extern "C" void on_device_signal(int) {
  if (g_device) g_device->request_stop();
}

int run_device(ScenarioFlags& flags, const std::string& server, std::string token, const std::string& config_flag,
               double speed, bool hold, bool verbose) {
  device::DeviceOptions opts;
  try {
    const auto path = config_path_or_env(config_flag);
    std::optional<gateway::GatewayConfig> cfg;
    if (!path.empty()) cfg = gateway::GatewayConfig::load(path);
    if (token.empty() && cfg) token = cfg->token;
    if (token.empty()) throw ConfigError("no token (use --token or a config with auth.token)");
    opts.token = token;
    if (!server.empty()) {
      const auto colon = server.rfind(':');
      if (colon == std::string::npos) throw ConfigError("--server must be host:port");
      opts.host = server.substr(0, colon);
      const auto p = parse_uint("--server port", server.substr(colon + 1));
      if (p == 0 || p > 65535) throw ConfigError("--server port out of range");
      opts.port = static_cast<std::uint16_t>(p);
    } else if (cfg) {
      opts.host = cfg->bind;
      opts.port = cfg->port;
    }
    opts.scenario = flags.scenario();
    opts.sensor = flags.sensor();
    opts.detector = flags.detector();
    opts.speed = speed;
    opts.hold = hold;
  } catch (const std::exception& e) {
    std::cerr << "sentinel device: " << e.what() << "\n";
    return kExitUsage;
  }

  device::DeviceClient client(opts);
  if (verbose) {
    client.on_log = [](std::string_view msg) { std::cerr << "device: " << msg << "\n"; };
  }
  g_device = &client;
  std::signal(SIGINT, on_device_signal);
  std::signal(SIGTERM, on_device_signal);
  const auto result = client.run();
  g_device = nullptr;
  switch (result) {
    case device::DeviceExit::Completed:
    case device::DeviceExit::Stopped: return kExitOk;
    case device::DeviceExit::AuthFailed: return kExitAuth;
    case device::DeviceExit::Unreachable: return kExitIo;
  }
  return kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Door-mounted intrusion sensor: simulation, gateway and device client"};
  app.require_subcommand(1);

  ScenarioFlags sim_flags;
  std::string sim_out;
  bool seven_columns = false;
  auto* sim = app.add_subcommand("sim", "run a scenario through the emulator and detector, write CSV");
  sim_flags.attach(*sim);
  sim->add_option("--out,-o", sim_out, "CSV output path (default stdout)");
  sim->add_flag("--paper-columns", seven_columns, "only Ax,Ay,Az,T,Gx,Gy,Gz");

  std::string serve_config;
  std::optional<std::uint16_t> serve_port;
  auto* serve = app.add_subcommand("serve", "run the gateway");
  serve->add_option("--config,-c", serve_config, "gateway config (fallback: $SENTINEL_CONFIG)");
  serve->add_option("--port", serve_port, "override server.port");

  ScenarioFlags dev_flags;
  std::string dev_server, dev_token, dev_config;
  double dev_speed = 1.0;
  bool dev_hold = false;
  bool dev_verbose = false;
  auto* dev = app.add_subcommand("device", "simulated device streaming to a gateway");
  dev_flags.attach(*dev);
  dev->add_option("--server", dev_server, "host:port");
  dev->add_option("--token", dev_token);
  dev->add_option("--config,-c", dev_config, "config for token/port (fallback: $SENTINEL_CONFIG)");
  dev->add_option("--speed", dev_speed, "playback speed, 0 = unpaced")->check(CLI::NonNegativeNumber);
  dev->add_flag("--hold", dev_hold, "stay connected after the scenario ends");
  dev->add_flag("--verbose,-v", dev_verbose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*sim) return run_sim(sim_flags, sim_out, seven_columns);
  if (*serve) return run_serve(serve_config, serve_port);
  return run_device(dev_flags, dev_server, dev_token, dev_config, dev_speed, dev_hold, dev_verbose);
}
