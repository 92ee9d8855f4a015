#pragma once
// Shared value types used across the pipeline stages.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace trajtopo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Point3 = std::array<double, 3>;

inline constexpr double kSecondsPerDay = 86400.0;

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// A user's trajectory after projection to 3D.
struct ReducedTrajectory {
  std::string user_id;
  std::vector<Point3> points;
  std::vector<double> timestamps_days;
};

}  // namespace trajtopo
