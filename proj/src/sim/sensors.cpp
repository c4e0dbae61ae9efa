#include <cmath>
#include <numbers>

#include "navevo/robot.hpp"
#include "navevo/sim.hpp"

namespace navevo {

SensorConfig SensorConfig::evolved12() {
  SensorConfig c;
  c.layout = SensorLayout::evolved12;
  c.range = 0.2;
  for (int k = 0; k < 12; ++k) c.angles.push_back(kTwoPi * k / 12.0);
  return c;
}

SensorConfig SensorConfig::ibug24() {
  SensorConfig c;
  c.layout = SensorLayout::ibug24;
  c.range = 2.0;
  const double half_wedge = std::numbers::pi / 3.0;
  for (int k = 0; k < 20; ++k) c.angles.push_back(-half_wedge + 2.0 * half_wedge * k / 19.0);
  c.angles.push_back(std::numbers::pi / 2.0);
  c.angles.push_back(-std::numbers::pi / 2.0);
  c.angles.push_back(std::numbers::pi);
  return c;
}

void observe_into(const RobotState& state, const World& world, const SensorConfig& config, InputMask mask,
                  Observation& out) {
  const Vec2 center = state.position();
  const Vec2 target = world.maze().target;
  out.target_range = distance(center, target);
  const double ccw = wrap_two_pi(std::atan2(target.y - center.y, target.x - center.x) - state.heading);
  out.bearing_ccw = ccw / kTwoPi;
  if (out.bearing_ccw >= 1.0) out.bearing_ccw = 0.0;
  out.bearing_cw = 1.0 - out.bearing_ccw;

  out.proximity.assign(config.count(), 0.0);
  if (mask == InputMask::range_only) return;

  const double reach = robot::kRadius + config.range;
  thread_local std::vector<int> nearby;
  nearby.clear();
  world.candidates({{center.x - reach, center.y - reach}, {center.x + reach, center.y + reach}}, nearby);
  if (nearby.empty()) return;
  const auto& walls = world.maze().walls;
  for (std::size_t i = 0; i < config.count(); ++i) {
    const double a = state.heading + config.angles[i];
    const Vec2 dir{std::cos(a), std::sin(a)};
    const Vec2 origin = center + robot::kRadius * dir;
    double best = INFINITY;
    for (int w : nearby) {
      if (auto t = ray_rect(origin, dir, walls[static_cast<std::size_t>(w)]); t && *t < best) best = *t;
    }
    if (best <= config.range) out.proximity[i] = 1.0 - best / config.range;
  }
}

Observation observe(const RobotState& state, const World& world, const SensorConfig& config) {
  Observation obs;
  observe_into(state, world, config, InputMask::full, obs);
  return obs;
}

}  // namespace navevo
