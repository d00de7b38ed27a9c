#include "sentinel/gateway/pins.hpp"

namespace sentinel::gateway {

std::string pin_name(VirtualPin p) { return "V" + std::to_string(static_cast<unsigned>(p)); }

std::optional<VirtualPin> parse_pin(std::string_view name) {
  if (name.size() != 2 || name[0] != 'V' || name[1] < '0' || name[1] > '4') {
    return std::nullopt;
  }
  return static_cast<VirtualPin>(name[1] - '0');
}

Frame make_pin_write(std::uint16_t id, std::string_view pin, std::string_view value) {
  return Frame{Command::Hardware, id, join_fields({"vw", pin, value})};
}

Frame make_pin_write(std::uint16_t id, VirtualPin pin, std::string_view value) {
  return make_pin_write(id, pin_name(pin), value);
}

std::optional<PinWrite> parse_pin_write(const Frame& f) {
  if (f.command != Command::Hardware) {
    return std::nullopt;
  }
  const auto fields = split_fields(f.body);
  if (fields.size() != 3 || fields[0] != "vw" || fields[1].empty()) {
    return std::nullopt;
  }
  return PinWrite{std::string(fields[1]), std::string(fields[2])};
}

std::string_view to_string(Role r) { return r == Role::Device ? "device" : "console"; }

Frame make_login(std::uint16_t id, std::string_view token, Role role) {
  return Frame{Command::Login, id, join_fields({token, to_string(role)})};
}

}  // namespace sentinel::gateway
