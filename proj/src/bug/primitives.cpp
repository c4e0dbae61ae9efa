#include <algorithm>
#include <cmath>
#include <numbers>

#include "navevo/bug.hpp"
#include "navevo/robot.hpp"

namespace navevo::bug {

namespace {

constexpr double kSpinRate = 2.0 * robot::kMaxWheelSpeed / robot::kAxleLength;
constexpr double kCornerSpin = 1.5;
constexpr double kLeftSector = -std::numbers::pi / 6.0;

struct Contact {
  double rho;
  double bearing;
};

// Closest obstacle point to the robot center, interpolated along segments
// joining neighbouring ray hits that plausibly lie on the same wall. This
// keeps the estimate continuous as the nearest ray switches.
std::optional<Contact> nearest_contact(const std::vector<RangePoint>& pts, const std::vector<Vec2>& extra,
                                       double max_gap, double min_bearing) {
  constexpr double kSameWall = 0.3;
  std::vector<const RangePoint*> order;
  for (const auto& q : pts) order.push_back(&q);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->angle < b->angle; });

  std::optional<Contact> best;
  auto consider = [&](double x, double y) {
    const double rho = std::hypot(x, y);
    const double bearing = std::atan2(y, x);
    if (rho - robot::kRadius > max_gap || bearing < min_bearing) return;
    if (!best || rho < best->rho) best = Contact{rho, bearing};
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    consider(order[i]->x, order[i]->y);
    if (i + 1 == order.size()) break;
    const RangePoint& a = *order[i];
    const RangePoint& b = *order[i + 1];
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 <= 0.0 || len2 > kSameWall * kSameWall) continue;
    const double t = std::clamp(-(a.x * dx + a.y * dy) / len2, 0.0, 1.0);
    consider(a.x + t * dx, a.y + t * dy);
  }
  for (const auto& q : extra) consider(q.x, q.y);
  return best;
}

}  // namespace

std::optional<WheelSpeeds> Orient::step(const Observation& obs, double dt) {
  if (std::abs(obs.signed_bearing()) < params_.alignment_tolerance) return std::nullopt;
  const double remaining = obs.bearing_ccw * kTwoPi;
  return twist(0.0, std::min(kSpinRate, remaining / dt));
}

void Forward::start(const Observation& obs) {
  detector_.reset(intensity(obs.target_range));
  reason_ = ForwardStop::contact;
}

std::optional<WheelSpeeds> Forward::step(const Observation& obs) {
  if (obs.target_range < robot::kTargetRadius) {
    reason_ = ForwardStop::target;
    return std::nullopt;
  }
  const bool peak = detector_.update(intensity(obs.target_range));
  if (front_gap(range_points(obs, *sensors_)) < params_.standoff) {
    reason_ = ForwardStop::contact;
    return std::nullopt;
  }
  if (peak) {
    reason_ = ForwardStop::local_max;
    return std::nullopt;
  }
  return WheelSpeeds{robot::kMaxWheelSpeed, robot::kMaxWheelSpeed};
}

void Follow::start(const Observation& obs) {
  detector_.reset(intensity(obs.target_range));
  lost_ = false;
  lost_time_ = 0.0;
  marks_.clear();
  last_command_.reset();
}

void Follow::remember(const std::vector<RangePoint>& pts, double dt) {
  constexpr int kMaxAge = 40;
  constexpr double kReach = 0.8;
  if (last_command_) {
    const double v = 0.5 * (last_command_->left + last_command_->right);
    const double omega = (last_command_->right - last_command_->left) / robot::kAxleLength;
    const Pose moved = arc_pose(Pose{}, v, omega, dt);
    const double c = std::cos(moved.theta), s = std::sin(moved.theta);
    for (auto& m : marks_) {
      const double dx = m.x - moved.x, dy = m.y - moved.y;
      m = {c * dx + s * dy, -s * dx + c * dy, m.age + 1};
    }
  }
  std::erase_if(marks_, [&](const Mark& m) { return m.age > kMaxAge || std::hypot(m.x, m.y) > kReach; });
  for (const auto& q : pts) {
    if (q.rho <= kReach) marks_.push_back({q.x, q.y, 0});
  }
}

std::optional<WheelSpeeds> Follow::step(const Observation& obs, double dt, bool until_local_max) {
  const bool peak = detector_.update(intensity(obs.target_range));
  if (until_local_max && peak) return std::nullopt;
  return command(obs, dt);
}

WheelSpeeds Follow::command(const Observation& obs, double dt) {
  const double r = robot::kRadius;
  const double hold = r + params_.standoff;
  const auto pts = range_points(obs, *sensors_);

  last_gap_ = INFINITY;
  for (const auto& q : pts) last_gap_ = std::min(last_gap_, q.rho - r);

  remember(pts, dt);
  std::vector<Vec2> recalled;
  for (const auto& m : marks_) {
    if (m.age > 0) recalled.push_back({m.x, m.y});
  }
  auto issue = [this](WheelSpeeds cmd) {
    last_command_ = cmd;
    return cmd;
  };

  if (front_gap(pts) < params_.standoff) {
    lost_ = false;
    return issue(twist(0.0, -kCornerSpin));
  }

  // Nearest contact on the left side; fall back to any side when the left is empty.
  std::optional<Contact> nearest;
  for (int pass = 0; pass < 2 && !nearest; ++pass) {
    nearest = nearest_contact(pts, recalled, params_.standoff + params_.contact_range,
                              pass == 0 ? kLeftSector : -INFINITY);
  }

  if (nearest) {
    lost_ = false;
    const double bearing_error = wrap_pi(nearest->bearing - std::numbers::pi / 2.0);
    const double omega =
        params_.follow_gain_distance * (nearest->rho - hold) + params_.follow_gain_bearing * bearing_error;
    const double v = robot::kMaxWheelSpeed * std::max(0.0, std::cos(bearing_error));
    return issue(twist(v, omega));
  }

  // Wall lost: arc left around the last contact for one full turn, then
  // drive straight until something is in reach again.
  if (!lost_) {
    lost_ = true;
    lost_time_ = 0.0;
    ++lost_events_;
  }
  lost_time_ += dt;
  const double arc_speed = 0.6 * robot::kMaxWheelSpeed;
  const double full_turn = kTwoPi * hold / arc_speed;
  if (lost_time_ < full_turn) return issue(twist(arc_speed, arc_speed / hold));
  return issue(WheelSpeeds{robot::kMaxWheelSpeed, robot::kMaxWheelSpeed});
}

namespace {

template <typename StepFn>
PrimitiveRun drive(const RobotState& start, const World& world, const EpisodeLimits& limits, bool track_gaps,
                   StepFn&& step) {
  Simulator sim(world, start, SensorConfig::ibug24(), limits);
  PrimitiveRun run;
  run.path.push_back(sim.state().position());
  while (!sim.out_of_time()) {
    const auto cmd = step(sim.observation());
    if (!cmd) {
      run.terminated = true;
      break;
    }
    sim.apply(*cmd);
    run.path.push_back(sim.state().position());
    if (track_gaps) run.gaps.push_back(world.clearance(sim.state().position(), 10.0) - robot::kRadius);
  }
  run.final_state = sim.state();
  run.ticks = sim.ticks();
  return run;
}

}  // namespace

PrimitiveRun run_orient(const RobotState& start, const World& world, const EpisodeLimits& limits,
                        PrimitiveParams params) {
  Orient orient(params);
  return drive(start, world, limits, false,
               [&](const Observation& obs) { return orient.step(obs, limits.control_dt); });
}

PrimitiveRun run_forward(const RobotState& start, const World& world, const EpisodeLimits& limits,
                         PrimitiveParams params) {
  const SensorConfig sensors = SensorConfig::ibug24();
  Forward forward(sensors, params);
  bool started = false;
  auto run = drive(start, world, limits, false, [&](const Observation& obs) {
    if (!started) {
      forward.start(obs);
      started = true;
    }
    return forward.step(obs);
  });
  run.forward_reason = forward.reason();
  return run;
}

PrimitiveRun run_follow(const RobotState& start, const World& world, const EpisodeLimits& limits,
                        PrimitiveParams params) {
  const SensorConfig sensors = SensorConfig::ibug24();
  Follow follow(sensors, params);
  bool started = false;
  return drive(start, world, limits, true, [&](const Observation& obs) {
    if (!started) {
      follow.start(obs);
      started = true;
    }
    return follow.step(obs, limits.control_dt);
  });
}

}  // namespace navevo::bug
