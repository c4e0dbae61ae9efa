#include <doctest.h>

#include <cmath>
#include <numbers>

#include "navevo/maze.hpp"
#include "navevo/random.hpp"
#include "navevo/robot.hpp"
#include "navevo/sim.hpp"
#include "oracles.hpp"

using namespace navevo;

namespace {

Maze open_arena(double side, Vec2 target) { return empty_maze(side, {1.0, 1.0, 0.0}, target); }

RobotState at(double x, double y, double heading, double vl = 0.0, double vr = 0.0) {
  RobotState s = RobotState::at({x, y, heading});
  s.left_speed = vl;
  s.right_speed = vr;
  return s;
}

// First wall hit along the ray found by marching in small steps and then
// bisecting on the inside/outside predicate.
std::optional<double> sampled_ray(const Maze& m, Vec2 o, double angle, double max_range) {
  const Vec2 d{std::cos(angle), std::sin(angle)};
  auto inside = [&](double t) {
    const Vec2 p = o + t * d;
    for (const auto& w : m.walls) {
      if (contains(w, p)) return true;
    }
    return false;
  };
  if (inside(0.0)) return 0.0;
  const double step = 5e-4;
  for (double t = step; t <= max_range + step; t += step) {
    if (!inside(t)) continue;
    double lo = t - step, hi = t;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? hi : lo) = mid;
    }
    if (hi > max_range) return std::nullopt;
    return hi;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("straight drive advances along the heading") {
  const World w(open_arena(14.0, {12.0, 12.0}));
  const RobotState s = step_kinematics(at(5.0, 5.0, 0.0, 0.1, 0.1), 1.0, w);
  CHECK(s.x == doctest::Approx(5.1).epsilon(1e-12));
  CHECK(std::abs(s.y - 5.0) < 1e-9);
  CHECK(std::abs(s.heading) < 1e-9);
  CHECK_FALSE(s.crashed);
}

TEST_CASE("opposite wheel speeds rotate in place") {
  const World w(open_arena(14.0, {12.0, 12.0}));
  const RobotState s = step_kinematics(at(5.0, 5.0, 0.0, 0.1, -0.1), 1.0, w);
  CHECK(std::abs(s.x - 5.0) < 1e-9);
  CHECK(std::abs(s.y - 5.0) < 1e-9);
  // Right wheel backwards turns clockwise.
  CHECK(std::abs(wrap_pi(s.heading + 0.2 / robot::kAxleLength)) < 1e-9);
}

TEST_CASE("one wheel stopped: arc about the stopped wheel") {
  const double r = robot::kAxleLength / 2.0;
  const double omega = 0.1 / robot::kAxleLength;
  const Pose p = arc_pose({0.0, 0.0, 0.0}, 0.05, omega, 1.0);
  // Circle of radius r centred on the left wheel at (0, r).
  CHECK(std::abs(p.x - r * std::sin(omega)) < 1e-12);
  CHECK(std::abs(p.y - (r - r * std::cos(omega))) < 1e-12);
  const Pose q = oracle::rk4_unicycle({0.0, 0.0, 0.0}, 0.05, omega, 1.0, 1e-4);
  CHECK(std::abs(p.x - q.x) < 1e-6);
  CHECK(std::abs(p.y - q.y) < 1e-6);
}

TEST_CASE("closed-form arcs match a fine-step numeric integration") {
  Rng rng(31337);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double vl = rng.uniform(-robot::kMaxWheelSpeed, robot::kMaxWheelSpeed);
    const double vr = rng.uniform(-robot::kMaxWheelSpeed, robot::kMaxWheelSpeed);
    const double dt = rng.uniform(0.01, 2.0);
    const Pose start{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0, kTwoPi)};
    const double v = 0.5 * (vl + vr), omega = (vr - vl) / robot::kAxleLength;
    const Pose a = arc_pose(start, v, omega, dt);
    const Pose b = oracle::rk4_unicycle(start, v, omega, dt, 1e-4);
    worst = std::max({worst, std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.theta - b.theta)});
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("arc pose is continuous through zero turn rate") {
  const Pose s{1.0, 2.0, 0.3};
  const Pose a = arc_pose(s, 0.15, 0.0, 2.0);
  const Pose b = arc_pose(s, 0.15, 1e-9, 2.0);
  CHECK(std::abs(a.x - b.x) < 1e-9);
  CHECK(std::abs(a.y - b.y) < 1e-9);
  CHECK(arc_chord(0.15, 0.0, 2.0) == doctest::Approx(0.3));
}

TEST_CASE("wheel speeds are clamped") {
  const World w(open_arena(14.0, {12.0, 12.0}));
  const StepOutcome o = step_robot(at(5.0, 5.0, 0.0, 5.0, 5.0), 1.0, w);
  CHECK(o.state.left_speed == robot::kMaxWheelSpeed);
  CHECK(o.state.x == doctest::Approx(5.0 + robot::kMaxWheelSpeed));
}

TEST_CASE("driving into a wall clamps at contact and latches crashed") {
  Maze m = open_arena(14.0, {12.0, 12.0});
  m.walls.push_back({{6.0, 4.0}, {6.1, 6.0}});
  const World w(m);
  RobotState s = at(5.5, 5.0, 0.0, 0.2, 0.2);
  for (int i = 0; i < 40; ++i) s = step_kinematics(s, 0.1, w);
  CHECK(s.crashed);
  CHECK(s.x == doctest::Approx(6.0 - robot::kRadius).epsilon(1e-6));
  CHECK_FALSE(w.collides(s.position(), robot::kRadius));
  s.left_speed = -0.2;
  s.right_speed = -0.2;
  s = step_kinematics(s, 1.0, w);
  CHECK(s.crashed);
}

TEST_CASE("raycast examples") {
  const Maze m = open_arena(14.0, {12.0, 12.0});
  const auto d = raycast(m, {7.0, 7.0}, 0.0, 10.0);
  REQUIRE(d);
  CHECK(*d == doctest::Approx(7.0 - kWallThickness).epsilon(1e-12));
  CHECK_FALSE(raycast(m, {7.0, 7.0}, 0.0, 5.0));

  Maze p = m;
  p.walls.push_back({{3.0, 5.0}, {9.0, 5.1}});
  CHECK_FALSE(raycast(p, {1.0, 5.5}, 0.0, 5.0));  // parallel, offset by 0.4
  const auto corner = raycast(p, {2.0, 4.0}, std::numbers::pi / 4.0, 5.0);
  REQUIRE(corner);
  CHECK(std::abs(*corner - std::numbers::sqrt2) < 1e-9);  // clips (3, 5)
}

TEST_CASE("raycast agrees with a sampling oracle") {
  Rng rng(8);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Maze m = generate_maze({8.0, 0.8, 1.0}, seed);
    for (int i = 0; i < 50; ++i) {
      const Vec2 o{rng.uniform(0.2, 7.8), rng.uniform(0.2, 7.8)};
      const double a = rng.uniform(0.0, kTwoPi);
      const auto fast = raycast(m, o, a, 3.0);
      const auto slow = sampled_ray(m, o, a, 3.0);
      REQUIRE(fast.has_value() == slow.has_value());
      if (fast) {
        ++hits;
        CHECK(std::abs(*fast - *slow) < 1e-6);
      }
    }
  }
  CHECK(hits > 100);
}

TEST_CASE("sensor layouts") {
  const auto e = SensorConfig::evolved12();
  CHECK(e.count() == 12);
  CHECK(e.range == 0.2);
  for (std::size_t i = 0; i < 12; ++i) CHECK(e.angles[i] == doctest::Approx(kTwoPi * i / 12.0));
  const auto b = SensorConfig::ibug24();
  CHECK(b.range == 2.0);
  int frontal = 0;
  for (double a : b.angles) frontal += std::abs(a) <= std::numbers::pi / 3.0 + 1e-12;
  CHECK(frontal == 20);
  CHECK(b.count() == 23);
}

TEST_CASE("observation examples") {
  Maze m = open_arena(14.0, {7.0, 7.0});
  m.walls.push_back({{10.0, 2.0}, {10.1, 4.0}});
  const World w(m);

  SUBCASE("at the target") {
    for (double h : {0.0, 1.0, 4.0}) CHECK(observe(at(7.0, 7.0, h), w, SensorConfig::evolved12()).target_range == 0.0);
  }
  SUBCASE("facing the target") {
    const Observation o = observe(at(3.0, 7.0, 0.0), w, SensorConfig::evolved12());
    CHECK(o.target_range == doctest::Approx(4.0));
    CHECK(o.bearing_ccw == 0.0);
    CHECK(o.bearing_cw == 1.0);
  }
  SUBCASE("target to the left") {
    const Observation o = observe(at(7.0, 3.0, 0.0), w, SensorConfig::evolved12());
    CHECK(o.bearing_ccw == doctest::Approx(0.25));
    CHECK(o.bearing_cw == doctest::Approx(0.75));
    CHECK(o.signed_bearing() == doctest::Approx(std::numbers::pi / 2.0));
  }
  SUBCASE("wall 0.1 m from the sensor") {
    const Observation o = observe(at(10.0 - robot::kRadius - 0.1, 3.0, 0.0), w, SensorConfig::evolved12());
    CHECK(o.proximity[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(o.proximity[6] == 0.0);
  }
  SUBCASE("range-only mask casts no rays") {
    Observation o;
    observe_into(at(10.0 - robot::kRadius - 0.1, 3.0, 0.0), w, SensorConfig::evolved12(), InputMask::range_only, o);
    CHECK(o.proximity.size() == 12);
    for (double p : o.proximity) CHECK(p == 0.0);
  }
}

TEST_CASE("episode with a stopped controller times out") {
  const World w(open_arena(14.0, {12.0, 12.0}));
  auto stop = FunctionController([](const Observation&) { return WheelSpeeds{0.0, 0.0}; });
  const EpisodeLimits lim{30.0};
  const EpisodeResult r = run_episode(stop, w, lim, SensorConfig::evolved12(), InputMask::full);
  CHECK_FALSE(r.solved);
  CHECK_FALSE(r.crashed);
  CHECK(r.trajectory_length == 0.0);
  CHECK(r.elapsed == doctest::Approx(30.0));
}

TEST_CASE("full speed at a target 5 m ahead") {
  const World w(empty_maze(14.0, {2.0, 7.0, 0.0}, {7.0, 7.0}));
  auto go = FunctionController([](const Observation&) { return WheelSpeeds{0.2, 0.2}; });
  const EpisodeResult r = run_episode(go, w, {}, SensorConfig::evolved12(), InputMask::full, {true, std::nullopt});
  CHECK(r.solved);
  const double tick = robot::kMaxWheelSpeed * 0.1;
  CHECK(std::abs(r.trajectory_length - (5.0 - robot::kTargetRadius)) <= tick);
  CHECK(std::abs(r.elapsed - (5.0 - robot::kTargetRadius) / robot::kMaxWheelSpeed) <= 0.1 + 1e-9);
  CHECK(r.final_distance < robot::kTargetRadius);
  CHECK(r.trajectory.size() == static_cast<std::size_t>(std::lround(r.elapsed / 0.1)) + 1);
}

TEST_CASE("left-turning controller: path length matches re-integration") {
  const World w(empty_maze(14.0, {7.0, 7.0, 0.0}, {12.5, 1.5}));
  auto turn = FunctionController([](const Observation&) { return WheelSpeeds{0.1, 0.2}; });
  const EpisodeResult r = run_episode(turn, w, {20.0}, SensorConfig::evolved12(), InputMask::full, {true, std::nullopt});
  REQUIRE_FALSE(r.crashed);
  // Independent re-integration, summing 0.01 s chords.
  const double v = 0.15, omega = 0.1 / robot::kAxleLength;
  Pose p{7.0, 7.0, 0.0};
  double length = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Pose q = oracle::rk4_unicycle(p, v, omega, 0.01, 1e-3);
    length += distance(p.position(), q.position());
    p = q;
  }
  CHECK(std::abs(r.trajectory_length - length) < 1e-3);
  CHECK(distance(r.trajectory.back(), p.position()) < 1e-6);
}

TEST_CASE("episode ends on crash and on non-finite commands") {
  Maze m = empty_maze(14.0, {2.0, 7.0, 0.0}, {12.0, 7.0});
  m.walls.push_back({{4.0, 6.0}, {4.1, 8.0}});
  const World w(m);
  auto go = FunctionController([](const Observation&) { return WheelSpeeds{0.2, 0.2}; });
  const EpisodeResult r = run_episode(go, w, {}, SensorConfig::evolved12(), InputMask::full);
  CHECK(r.crashed);
  CHECK_FALSE(r.solved);
  CHECK(r.elapsed < 20.0);

  auto nan = FunctionController([](const Observation&) { return WheelSpeeds{std::nan(""), 0.0}; });
  const EpisodeResult n = run_episode(nan, w, {}, SensorConfig::evolved12(), InputMask::full);
  CHECK(n.crashed);
  CHECK(n.trajectory_length == 0.0);
}

TEST_CASE("episodes are deterministic") {
  const Maze m = generate_maze({14.0, 0.8, 1.0}, 3);
  const World w(m);
  auto wander = FunctionController([](const Observation& o) {
    const double turn = o.signed_bearing() > 0 ? 0.05 : -0.05;
    const double block = o.proximity[0] + o.proximity[1] + o.proximity[11];
    return block > 0.2 ? WheelSpeeds{0.1, -0.1} : WheelSpeeds{0.15 - turn, 0.15 + turn};
  });
  const auto a = run_episode(wander, w, {60.0}, SensorConfig::evolved12(), InputMask::full, {true, std::nullopt});
  const auto b = run_episode(wander, w, {60.0}, SensorConfig::evolved12(), InputMask::full, {true, std::nullopt});
  CHECK(a.trajectory_length == b.trajectory_length);
  CHECK(a.trajectory == b.trajectory);
  CHECK(a.elapsed == b.elapsed);
}

TEST_CASE("property: path length bounded by speed, walls impenetrable, readings in range") {
  Rng rng(4242);
  const auto sensors = SensorConfig::evolved12();
  long ticks = 0, contacts = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Maze m = generate_maze({6.0, 0.9, 1.0}, seed);
    const World w(m);
    for (int ep = 0; ep < 5; ++ep) {
      Simulator sim(w, RobotState::at(m.start), sensors, {60.0});
      double a = rng.uniform(-0.2, 0.2), b = rng.uniform(-0.2, 0.2);
      while (!sim.out_of_time()) {
        if (rng.bernoulli(0.1)) {
          a = rng.uniform(-0.25, 0.25);
          b = rng.uniform(-0.25, 0.25);
        }
        const double before = sim.trajectory_length();
        const bool was_crashed = sim.state().crashed;
        sim.apply({a, b});
        ++ticks;
        const RobotState& s = sim.state();
        REQUIRE(sim.trajectory_length() - before <= robot::kMaxWheelSpeed * 0.1 + 1e-9);
        REQUIRE(sim.trajectory_length() <= robot::kMaxWheelSpeed * sim.time() + 1e-6);
        REQUIRE(point_in_free_space(m, s.position(), robot::kRadius * (1.0 - 1e-9)));
        REQUIRE(std::abs(s.left_speed) <= robot::kMaxWheelSpeed);
        REQUIRE(s.heading >= 0.0);
        REQUIRE(s.heading < kTwoPi);
        if (was_crashed) REQUIRE(s.crashed);
        contacts += s.crashed && !was_crashed;
        const Observation& o = sim.observation();
        REQUIRE(o.target_range >= 0.0);
        for (double p : o.proximity) REQUIRE((p >= 0.0 && p <= 1.0));
        REQUIRE(std::abs(o.bearing_cw + o.bearing_ccw - 1.0) < 1e-12);
      }
    }
  }
  CHECK(ticks >= 10000);
  CHECK(contacts > 20);
}

TEST_CASE("property: solved episodes end inside the target radius") {
  Rng rng(77);
  int solved = 0;
  for (int i = 0; i < 200; ++i) {
    const Pose start{rng.uniform(1.0, 9.0), rng.uniform(1.0, 9.0), rng.uniform(0.0, kTwoPi)};
    const World w(empty_maze(10.0, start, {rng.uniform(1.0, 9.0), rng.uniform(1.0, 9.0)}));
    auto seek = FunctionController([](const Observation& o) {
      const double b = o.signed_bearing();
      return std::abs(b) > 0.3 ? WheelSpeeds{b > 0 ? -0.1 : 0.1, b > 0 ? 0.1 : -0.1} : WheelSpeeds{0.2 - b * 0.1, 0.2 + b * 0.1};
    });
    const auto r = run_episode(seek, w, {80.0}, SensorConfig::evolved12(), InputMask::full);
    if (r.solved) {
      ++solved;
      CHECK(r.final_distance < robot::kTargetRadius);
    }
  }
  CHECK(solved > 150);
}
