#include <algorithm>
#include <cmath>

#include "navevo/robot.hpp"
#include "navevo/sim.hpp"

namespace navevo {

namespace {

constexpr int kBisectionSteps = 40;

// 2 sin(w t / 2) / w, stable as w -> 0.
double chord_factor(double omega, double t) {
  const double half = 0.5 * omega * t;
  if (std::abs(half) < 1e-4) return t * (1.0 - half * half / 6.0);
  return 2.0 * std::sin(half) / omega;
}

}  // namespace

Pose arc_pose(const Pose& start, double v, double omega, double t) {
  const double c = v * chord_factor(omega, t);
  const double mid = start.theta + 0.5 * omega * t;
  return {start.x + c * std::cos(mid), start.y + c * std::sin(mid), start.theta + omega * t};
}

double arc_chord(double v, double omega, double t) { return std::abs(v * chord_factor(omega, t)); }

StepOutcome step_robot(const RobotState& state, double dt, const World& world, int substeps) {
  StepOutcome out;
  out.state = state;
  RobotState& s = out.state;
  s.left_speed = std::clamp(s.left_speed, -robot::kMaxWheelSpeed, robot::kMaxWheelSpeed);
  s.right_speed = std::clamp(s.right_speed, -robot::kMaxWheelSpeed, robot::kMaxWheelSpeed);
  const double v = 0.5 * (s.left_speed + s.right_speed);
  const double omega = (s.right_speed - s.left_speed) / robot::kAxleLength;
  const Pose start{s.x, s.y, s.heading};
  const int n = std::max(1, substeps);
  const double h = dt / n;

  auto finish = [&](const Pose& p) {
    s.x = p.x;
    s.y = p.y;
    s.heading = wrap_two_pi(p.theta);
  };

  // The center moves at most |v| dt; if nothing is that close, no substep can touch.
  const double reach = robot::kRadius + std::abs(v) * dt + 1e-9;
  if (world.clearance(start.position(), reach) >= reach) {
    finish(arc_pose(start, v, omega, dt));
    out.travelled = n * arc_chord(v, omega, h);
    return out;
  }

  Pose prev = start;
  for (int k = 1; k <= n; ++k) {
    const Pose next = arc_pose(start, v, omega, k * h);
    if (!world.collides(next.position(), robot::kRadius)) {
      out.travelled += distance(prev.position(), next.position());
      prev = next;
      continue;
    }
    // Last free time within this substep.
    double lo = (k - 1) * h, hi = k * h;
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (world.collides(arc_pose(start, v, omega, mid).position(), robot::kRadius)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    Pose contact = arc_pose(start, v, omega, lo);
    if (world.collides(contact.position(), robot::kRadius)) contact = prev;
    out.travelled += distance(prev.position(), contact.position());
    // Blocked translation; the wheels still turn the body in place.
    contact.theta = start.theta + omega * dt;
    finish(contact);
    s.crashed = true;
    out.contact = true;
    return out;
  }
  finish(arc_pose(start, v, omega, dt));
  return out;
}

RobotState step_kinematics(const RobotState& state, double dt, const World& world) {
  return step_robot(state, dt, world).state;
}

RobotState step_kinematics(const RobotState& state, double dt, const Maze& maze) {
  return step_kinematics(state, dt, World(maze));
}

}  // namespace navevo
