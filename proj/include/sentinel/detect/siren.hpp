#pragma once

#include "sentinel/detect/engine.hpp"

namespace sentinel::detect {

/// On/off actuator for the alarm siren. The acoustic side is not modeled;
/// the constants describe the part that the output drives.
class Siren {
 public:
  static constexpr double kSoundPressureDb = 105.0;  // at 1 m, 12 V
  static constexpr double kRatedCurrentMa = 120.0;
  static constexpr double kSupplyMinV = 10.5;
  static constexpr double kSupplyMaxV = 13.5;

  bool on() const { return on_; }

  /// Returns true when the command changed the output.
  bool apply(SirenCommand cmd) {
    const bool want = cmd == SirenCommand::On;
    const bool changed = want != on_;
    on_ = want;
    return changed;
  }

 private:
  bool on_ = false;
};

}  // namespace sentinel::detect
