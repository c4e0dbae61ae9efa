#include <algorithm>
#include <cmath>

#include "navevo/bug.hpp"
#include "navevo/robot.hpp"

namespace navevo::bug {

double intensity(double distance) { return 1.0 / (1.0 + std::max(0.0, distance)); }

void LocalMaxDetector::reset(double value) {
  last_ = value;
  rose_ = false;
}

bool LocalMaxDetector::update(double value) {
  if (value > last_ + hysteresis_) {
    rose_ = true;
    last_ = value;
    return false;
  }
  if (value < last_ - hysteresis_) {
    const bool peak = rose_;
    rose_ = false;
    last_ = value;
    return peak;
  }
  return false;
}

std::vector<RangePoint> range_points(const Observation& obs, const SensorConfig& sensors) {
  std::vector<RangePoint> pts;
  for (std::size_t i = 0; i < obs.proximity.size() && i < sensors.count(); ++i) {
    const double p = obs.proximity[i];
    if (p <= 0.0) continue;
    const double a = sensors.angles[i];
    const double rho = robot::kRadius + (1.0 - p) * sensors.range;
    pts.push_back({a, rho, a, rho * std::cos(a), rho * std::sin(a)});
  }
  return pts;
}

double front_gap(const std::vector<RangePoint>& points, double lateral_margin) {
  const double r = robot::kRadius;
  double gap = INFINITY;
  for (const auto& q : points) {
    if (q.x <= 0.0 || std::abs(q.y) >= r + lateral_margin) continue;
    gap = std::min(gap, q.x - std::sqrt(std::max(0.0, r * r - q.y * q.y)));
  }
  return gap;
}

WheelSpeeds twist(double v, double omega) {
  double left = v - 0.5 * omega * robot::kAxleLength;
  double right = v + 0.5 * omega * robot::kAxleLength;
  const double peak = std::max(std::abs(left), std::abs(right));
  if (peak > robot::kMaxWheelSpeed) {
    left *= robot::kMaxWheelSpeed / peak;
    right *= robot::kMaxWheelSpeed / peak;
  }
  return {left, right};
}

}  // namespace navevo::bug
