#include "disip/motion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace disip {

Pose interpolate(const Pose& from, const Pose& to, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("interpolate: fraction outside [0, 1]");
  }
  if (s == 0.0) return from;
  if (s == 1.0) return to;
  const double dpsi = normalize_yaw(to.psi - from.psi);
  return Pose(from.x + s * (to.x - from.x), from.y + s * (to.y - from.y),
              from.z + s * (to.z - from.z), from.psi + s * dpsi);
}

double travel_time(const Pose& from, const Pose& to, double speed, double yaw_rate_max) {
  if (!(speed > 0.0) || !(yaw_rate_max > 0.0)) {
    throw std::invalid_argument("travel_time: speed and yaw rate must be positive");
  }
  return std::max(distance(from, to) / speed, angular_distance(from.psi, to.psi) / yaw_rate_max);
}

TimedSegment make_segment(const Pose& start, const Pose& end, double speed,
                          double yaw_rate_max) {
  return {start, end, travel_time(start, end, speed, yaw_rate_max), speed};
}

}  // namespace disip
