#include "sentinel/physical.hpp"

#include <cmath>
#include <numbers>

namespace sentinel {

std::optional<double> try_tilt_angle(const Vec3& accel_g) noexcept {
  if (accel_g.x == 0.0 && accel_g.z == 0.0) {
    return std::nullopt;
  }
  double deg = std::atan2(accel_g.x, accel_g.z) * (180.0 / std::numbers::pi);
  // atan2(-0.0, z<0) yields -pi; keep the half-open range (-180, 180].
  if (deg <= -180.0) {
    deg = 180.0;
  }
  return deg;
}

double tilt_angle(const Vec3& accel_g) {
  if (auto deg = try_tilt_angle(accel_g)) {
    return *deg;
  }
  throw DegenerateOrientation();
}

}  // namespace sentinel
