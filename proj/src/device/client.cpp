#include "sentinel/device/client.hpp"

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include <boost/asio.hpp>

#include "sentinel/gateway/frame.hpp"
#include "sentinel/gateway/pins.hpp"
#include "sentinel/sim/monitor.hpp"

namespace sentinel::device {

namespace asio = boost::asio;
using tcp = asio::ip::tcp;
using gateway::DecodeStatus;
using gateway::Frame;
using gateway::VirtualPin;

namespace {

enum class OpenResult : std::uint8_t { Ok, AuthFailed, IoError };

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// One TCP connection to the gateway plus its reader thread.
class Link {
 public:
  ~Link() { close(); }

  OpenResult open(const std::string& host, std::uint16_t port, const std::string& token) {
    close();
    boost::system::error_code ec;
    socket_ = std::make_unique<tcp::socket>(ioc_);
    tcp::resolver resolver(ioc_);
    const auto endpoints = resolver.resolve(host, std::to_string(port), ec);
    if (ec) return OpenResult::IoError;
    asio::connect(*socket_, endpoints, ec);
    if (ec) return OpenResult::IoError;
    socket_->set_option(tcp::no_delay(true), ec);

    const auto login_id = next_id();
    asio::write(*socket_, asio::buffer(gateway::encode_frame(gateway::make_login(login_id, token, gateway::Role::Device))),
                ec);
    if (ec) return OpenResult::IoError;

    std::vector<std::uint8_t> buf;
    std::array<std::uint8_t, 512> chunk{};
    while (true) {
      const auto r = gateway::decode_frame(buf);
      if (r.status == DecodeStatus::ProtocolError) return OpenResult::IoError;
      if (r.status == DecodeStatus::Ok) {
        buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(r.consumed));
        if (r.frame.command != gateway::Command::Response || r.frame.message_id != login_id) continue;
        gateway::Status st{};
        if (!gateway::parse_status(r.frame.body, st) || st != gateway::Status::Ok) {
          close();
          return OpenResult::AuthFailed;
        }
        break;
      }
      const auto n = socket_->read_some(asio::buffer(chunk), ec);
      if (ec) {
        return OpenResult::IoError;
      }
      buf.insert(buf.end(), chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(n));
    }

    {
      std::lock_guard lock(mu_);
      lost_ = false;
      reader_done_ = false;
    }
    reader_ = std::thread([this, rest = std::move(buf)]() mutable { read_loop(std::move(rest)); });
    return OpenResult::Ok;
  }

  bool send(const Frame& f) {
    if (!socket_) return false;
    boost::system::error_code ec;
    asio::write(*socket_, asio::buffer(gateway::encode_frame(f)), ec);
    if (ec) {
      mark_lost();
      return false;
    }
    return true;
  }

  std::uint16_t next_id() {
    const auto id = next_id_++;
    if (next_id_ == 0) next_id_ = 1;
    return id;
  }

  /// Waits for a command or a dropped link, at most until `until`.
  void wait_until(std::chrono::steady_clock::time_point until) {
    std::unique_lock lock(mu_);
    cv_.wait_until(lock, until, [&] { return !commands_.empty() || lost_; });
  }

  std::optional<bool> pop_command() {
    std::lock_guard lock(mu_);
    if (commands_.empty()) return std::nullopt;
    const bool arm = commands_.front();
    commands_.pop_front();
    return arm;
  }

  bool lost() const {
    std::lock_guard lock(mu_);
    return lost_;
  }

  /// Half-closes, lets the gateway finish reading, then tears down.
  void close() {
    if (!socket_) return;
    boost::system::error_code ec;
    socket_->shutdown(tcp::socket::shutdown_send, ec);
    if (reader_.joinable()) {
      std::unique_lock lock(mu_);
      cv_.wait_for(lock, std::chrono::seconds(1), [&] { return reader_done_; });
    }
    socket_->shutdown(tcp::socket::shutdown_both, ec);
    socket_->close(ec);
    if (reader_.joinable()) reader_.join();
    socket_.reset();
  }

 private:
  void mark_lost() {
    {
      std::lock_guard lock(mu_);
      lost_ = true;
    }
    cv_.notify_all();
  }

  void read_loop(std::vector<std::uint8_t> buf) {
    std::array<std::uint8_t, 1024> chunk{};
    boost::system::error_code ec;
    while (true) {
      std::size_t offset = 0;
      bool broken = false;
      while (true) {
        const auto r = gateway::decode_frame(std::span<const std::uint8_t>(buf).subspan(offset));
        if (r.status == DecodeStatus::NeedMore) break;
        if (r.status == DecodeStatus::ProtocolError) {
          broken = true;
          break;
        }
        offset += r.consumed;
        if (auto w = gateway::parse_pin_write(r.frame); w && w->pin == "V3" && (w->value == "0" || w->value == "1")) {
          {
            std::lock_guard lock(mu_);
            commands_.push_back(w->value == "1");
          }
          cv_.notify_all();
        }
      }
      buf.erase(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(offset));
      if (broken) break;
      const auto n = socket_->read_some(asio::buffer(chunk), ec);
      if (ec) break;
      buf.insert(buf.end(), chunk.begin(), chunk.begin() + static_cast<std::ptrdiff_t>(n));
    }
    {
      std::lock_guard lock(mu_);
      lost_ = true;
      reader_done_ = true;
    }
    cv_.notify_all();
  }

  asio::io_context ioc_;
  std::unique_ptr<tcp::socket> socket_;
  std::thread reader_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<bool> commands_;
  bool lost_ = false;
  bool reader_done_ = false;
  std::uint16_t next_id_ = 1;
};

}  // namespace

DeviceClient::DeviceClient(DeviceOptions options) : options_(std::move(options)) {
  options_.scenario.validate();
  options_.detector.validate();
}

DeviceExit DeviceClient::run() {
  using clock = std::chrono::steady_clock;
  constexpr auto kSlice = std::chrono::milliseconds(50);

  sim::ScenarioGenerator gen(options_.scenario, options_.sensor);
  sim::Monitor monitor(options_.sensor, options_.detector);
  Link link;

  auto log = [&](std::string_view msg) {
    if (on_log) on_log(msg);
  };
  auto send_state = [&] {
    link.send(gateway::make_pin_write(link.next_id(), VirtualPin::Mode,
                                      std::to_string(static_cast<unsigned>(monitor.state().mode))));
    link.send(gateway::make_pin_write(link.next_id(), VirtualPin::Siren, monitor.siren().on() ? "1" : "0"));
  };
  auto interruptible_sleep = [&](std::chrono::milliseconds d) {
    const auto until = clock::now() + d;
    while (!stop_.load() && clock::now() < until) {
      std::this_thread::sleep_for(std::min<clock::duration>(kSlice, until - clock::now()));
    }
  };

  auto connect = [&]() -> std::optional<DeviceExit> {
    int failures = 0;
    auto backoff = options_.backoff_initial;
    while (true) {
      if (stop_.load()) return DeviceExit::Stopped;
      switch (link.open(options_.host, options_.port, options_.token)) {
        case OpenResult::Ok:
          log("connected");
          send_state();
          return std::nullopt;
        case OpenResult::AuthFailed:
          log("login rejected");
          return DeviceExit::AuthFailed;
        case OpenResult::IoError:
          break;
      }
      if (++failures > options_.max_reconnects) {
        log("gateway unreachable");
        return DeviceExit::Unreachable;
      }
      log("connect failed, retrying");
      interruptible_sleep(backoff);
      backoff = std::min(backoff * 2, options_.backoff_max);
    }
  };

  auto apply_commands = [&] {
    while (auto arm = link.pop_command()) {
      if (*arm) {
        monitor.arm();
      } else {
        monitor.disarm();
      }
      log(*arm ? "armed" : "disarmed");
      send_state();
    }
  };

  if (auto e = connect()) return *e;

  const auto period = std::chrono::duration<double, std::milli>(options_.sensor.sample_period_ms);
  while (true) {
    if (stop_.load()) {
      link.close();
      return DeviceExit::Stopped;
    }
    apply_commands();
    if (link.lost()) {
      log("connection lost");
      link.close();
      if (auto e = connect()) return *e;
      continue;
    }

    if (gen.done()) {
      if (!options_.hold) {
        link.close();
        return DeviceExit::Completed;
      }
      link.wait_until(clock::now() + kSlice);
      continue;
    }

    const auto tick_start = clock::now();
    const auto raw = *gen.next();
    auto out = monitor.process(raw);
    link.send(gateway::make_pin_write(link.next_id(), VirtualPin::Tilt, fmt2(out.sample.theta_y_deg)));
    link.send(gateway::make_pin_write(link.next_id(), VirtualPin::Temperature, fmt2(out.sample.temp_c)));
    if (out.event) {
      // The gateway raises V4 when it relays the notification.
      link.send(Frame{gateway::Command::Notify, link.next_id(), out.event->message});
      link.send(gateway::make_pin_write(link.next_id(), VirtualPin::Mode,
                                        std::to_string(static_cast<unsigned>(monitor.state().mode))));
      log(out.event->message);
    }

    if (options_.speed > 0.0) {
      const auto deadline =
          tick_start + std::chrono::duration_cast<clock::duration>(period / options_.speed);
      while (!stop_.load() && !link.lost() && clock::now() < deadline) {
        link.wait_until(std::min(deadline, clock::now() + kSlice));
        apply_commands();
      }
    }
  }
}

}  // namespace sentinel::device
