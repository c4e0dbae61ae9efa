#include <algorithm>
#include <cmath>
#include <numbers>

#include "navevo/bug.hpp"
#include "navevo/robot.hpp"

namespace navevo::bug {

namespace {

constexpr double kHeadingBand = 0.3;     // rad; beyond this Com turns in place
constexpr double kHeadingGain = 2.0;
constexpr double kMinBoundaryTime = 2.0;  // s on a boundary before leaving is considered
constexpr double kVisibleBearing = std::numbers::pi / 3.0 + 0.05;

}  // namespace

ComController::ComController(SensorConfig sensors, double control_dt, PrimitiveParams params, double lookahead)
    : sensors_(std::move(sensors)), dt_(control_dt), params_(params), lookahead_(lookahead), follow_(sensors_, params) {}

void ComController::reset() {
  state_ = ComState{};
  time_ = 0.0;
  follow_ = Follow(sensors_, params_);
}

bool ComController::target_line_clear(const Observation& obs) const {
  const double b = obs.signed_bearing();
  if (std::abs(b) > kVisibleBearing) return false;
  const double ux = std::cos(b), uy = std::sin(b);
  const double reach = std::min(lookahead_, obs.target_range);
  for (const auto& q : range_points(obs, sensors_)) {
    const double along = q.x * ux + q.y * uy;
    const double lateral = std::abs(q.x * uy - q.y * ux);
    if (along > 0.0 && lateral < robot::kRadius + 0.05 && along - robot::kRadius < reach) return false;
  }
  return true;
}

WheelSpeeds ComController::act(const Observation& obs) {
  time_ += dt_;
  if (state_.mode == ComMode::boundary_following) {
    state_.followed += dt_;
    if (state_.followed >= kMinBoundaryTime && target_line_clear(obs)) {
      state_.mode = ComMode::to_target;
    } else {
      return follow_.command(obs, dt_);
    }
  }

  const double b = obs.signed_bearing();
  if (std::abs(b) > kHeadingBand) return twist(0.0, std::copysign(1.5, b));
  if (front_gap(range_points(obs, sensors_)) < params_.standoff) {
    state_.mode = ComMode::boundary_following;
    state_.hit_time = time_;
    state_.followed = 0.0;
    follow_.start(obs);
    return follow_.command(obs, dt_);
  }
  return twist(robot::kMaxWheelSpeed, kHeadingGain * b);
}

EpisodeResult run_com(const World& world, const EpisodeLimits& limits, const EpisodeOptions& options) {
  ComController controller(SensorConfig::ibug24(), limits.control_dt);
  return run_episode(controller, world, limits, SensorConfig::ibug24(), InputMask::full, options);
}

Maze loop_trap_maze() {
  Maze maze = empty_maze(8.0, Pose{1.0, 1.0, 0.0}, Vec2{6.0, 5.0});
  maze.walls.push_back(Rect{{4.5, 3.95}, {7.9, 4.05}});
  return maze;
}

}  // namespace navevo::bug
