#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sentinel/gateway/frame.hpp"

namespace sentinel::gateway {

// Virtual pin assignments:
//   V0 tilt angle in degrees   (device -> consoles)
//   V1 temperature in deg C    (device -> consoles)
//   V2 alarm mode, AlarmMode numeric value (device -> consoles)
//   V3 arm (1) / disarm (0)    (console -> device)
//   V4 siren on (1) / off (0)  (device or gateway -> consoles)
enum class VirtualPin : std::uint8_t { Tilt = 0, Temperature = 1, Mode = 2, ArmCommand = 3, Siren = 4 };

constexpr bool is_telemetry_pin(VirtualPin p) { return p != VirtualPin::ArmCommand; }

std::string pin_name(VirtualPin p);
/// "V0".."V4"; anything else is not a known pin.
std::optional<VirtualPin> parse_pin(std::string_view name);

/// HARDWARE body "vw\0<pin>\0<value>".
struct PinWrite {
  std::string pin;  // as written on the wire, e.g. "V1"
  std::string value;
};

Frame make_pin_write(std::uint16_t id, VirtualPin pin, std::string_view value);
Frame make_pin_write(std::uint16_t id, std::string_view pin, std::string_view value);
/// nullopt unless the frame is HARDWARE "vw" with exactly a pin and a value.
std::optional<PinWrite> parse_pin_write(const Frame& f);

/// LOGIN body "<token>\0<role>"; role is "device" when omitted.
enum class Role : std::uint8_t { Device, Console };
std::string_view to_string(Role r);
Frame make_login(std::uint16_t id, std::string_view token, Role role);

}  // namespace sentinel::gateway
