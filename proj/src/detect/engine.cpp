#include "sentinel/detect/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sentinel::detect {

void DetectorConfig::validate() const {
  if (!(theta_threshold_deg > 0.0)) {
    throw std::invalid_argument("theta threshold must be positive");
  }
  if (debounce_count < 1) {
    throw std::invalid_argument("debounce count must be at least 1");
  }
}

std::string_view to_string(AlarmMode m) {
  switch (m) {
    case AlarmMode::Disarmed: return "Disarmed";
    case AlarmMode::Armed: return "Armed";
    case AlarmMode::TiltAlarm: return "TiltAlarm";
    case AlarmMode::TempAlarm: return "TempAlarm";
  }
  return "?";
}

std::string_view message_for(AlarmKind kind) {
  return kind == AlarmKind::Tilt ? kTiltMessage : kTempMessage;
}

AlarmState AlarmState::initial(const DetectorConfig& cfg) {
  AlarmState s;
  s.mode = cfg.armed_at_start ? AlarmMode::Armed : AlarmMode::Disarmed;
  return s;
}

StepResult step(const AlarmState& state, const PhysicalSample& s, const DetectorConfig& cfg) {
  StepResult out{state, std::nullopt, std::nullopt};
  AlarmState& next = out.state;

  switch (state.mode) {
    case AlarmMode::Disarmed:
      next.consecutive_tilt = 0;
      next.consecutive_temp = 0;
      next.siren_on = false;
      return out;
    case AlarmMode::TiltAlarm:
    case AlarmMode::TempAlarm:
      return out;
    case AlarmMode::Armed:
      break;
  }

  const bool tilt_out = std::fabs(s.theta_y_deg) > cfg.theta_threshold_deg;
  const bool temp_out = s.temp_c > cfg.temp_threshold_c;
  next.consecutive_tilt = tilt_out ? std::min(state.consecutive_tilt + 1, cfg.debounce_count) : 0;
  next.consecutive_temp = temp_out ? std::min(state.consecutive_temp + 1, cfg.debounce_count) : 0;

  std::optional<AlarmKind> fired;
  if (next.consecutive_tilt >= cfg.debounce_count) {
    fired = AlarmKind::Tilt;
  } else if (next.consecutive_temp >= cfg.debounce_count) {
    fired = AlarmKind::Temp;
  }
  if (fired) {
    next.mode = *fired == AlarmKind::Tilt ? AlarmMode::TiltAlarm : AlarmMode::TempAlarm;
    next.siren_on = true;
    out.event = AlarmEvent{*fired, std::string(message_for(*fired)), s.t_ms, s};
    out.siren = SirenCommand::On;
  }
  return out;
}

AlarmState arm(const AlarmState&) { return AlarmState{AlarmMode::Armed, false, 0, 0}; }

AlarmState disarm(const AlarmState&) { return AlarmState{AlarmMode::Disarmed, false, 0, 0}; }

}  // namespace sentinel::detect
