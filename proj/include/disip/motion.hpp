#pragma once

#include "disip/core.hpp"

namespace disip {

// Straight-line pose interpolation; yaw follows the shortest arc.
// s must lie in [0, 1].
Pose interpolate(const Pose& from, const Pose& to, double s);

// Execution time of the straight-line connection when translation and yaw
// run simultaneously: max(distance / speed, yaw distance / yaw rate).
double travel_time(const Pose& from, const Pose& to, double speed, double yaw_rate_max);

struct TimedSegment {
  Pose start;
  Pose end;
  double duration = 0.0;
  double speed_limit_used = 0.0;
};

TimedSegment make_segment(const Pose& start, const Pose& end, double speed,
                          double yaw_rate_max);

}  // namespace disip
