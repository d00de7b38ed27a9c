#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace sentinel {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// A reading in physical units. theta_y_deg is the door tilt in (-180, 180].
struct PhysicalSample {
  Vec3 accel_g;
  Vec3 gyro_dps;
  double temp_c = 0.0;
  double theta_y_deg = 0.0;
  // false when the gravity vector has no x/z component and theta_y_deg is
  // not observable from this sample.
  bool tilt_valid = true;
  std::uint64_t t_ms = 0;

  friend bool operator==(const PhysicalSample&, const PhysicalSample&) = default;
};

class DegenerateOrientation : public std::domain_error {
 public:
  DegenerateOrientation() : std::domain_error("gravity vector lies entirely on the y axis") {}
};

/// Angle of the x/z acceleration about the y axis, atan2(x, z) in degrees.
/// Throws DegenerateOrientation when x == 0 and z == 0.
double tilt_angle(const Vec3& accel_g);

/// Non-throwing variant of tilt_angle.
std::optional<double> try_tilt_angle(const Vec3& accel_g) noexcept;

}  // namespace sentinel
