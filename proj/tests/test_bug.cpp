#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "navevo/bug.hpp"
#include "navevo/eval.hpp"
#include "navevo/parallel.hpp"
#include "navevo/random.hpp"
#include "navevo/robot.hpp"

using namespace navevo;
using bug::ForwardStop;

namespace {

const double kPi = std::numbers::pi;

RobotState at(double x, double y, double heading) { return RobotState::at({x, y, heading}); }

double bearing_to(const RobotState& s, Vec2 target) {
  return wrap_pi(std::atan2(target.y - s.y, target.x - s.x) - s.heading);
}

// Net angle swept by the trajectory around a point, ccw positive.
double winding(const std::vector<Vec2>& path, Vec2 c) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double a0 = std::atan2(path[i - 1].y - c.y, path[i - 1].x - c.x);
    const double a1 = std::atan2(path[i].y - c.y, path[i].x - c.x);
    total += wrap_pi(a1 - a0);
  }
  return total;
}

Maze square_obstacle_maze() {
  Maze m = empty_maze(14.0, {3.0, 7.0, 0.0}, {11.0, 7.0});
  m.walls.push_back({{6.0, 6.0}, {8.0, 8.0}});
  return m;
}

}  // namespace

TEST_CASE("intensity") {
  CHECK(bug::intensity(0.0) == 1.0);
  CHECK(bug::intensity(1.0) == 0.5);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform(0.0, 20.0), b = rng.uniform(0.0, 20.0);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    REQUIRE(bug::intensity(a) > bug::intensity(b));
    REQUIRE(bug::intensity(a) <= 1.0);
    REQUIRE(bug::intensity(b) > 0.0);
  }
}

TEST_CASE("local maximum detector needs a rise before a drop") {
  bug::LocalMaxDetector d;
  d.reset(0.5);
  CHECK_FALSE(d.update(0.4));
  CHECK_FALSE(d.update(0.45));
  CHECK_FALSE(d.update(0.45 + 1e-8));  // below the hysteresis: no change
  CHECK(d.update(0.44));
}

TEST_CASE("orient: already aligned returns immediately") {
  const World w(empty_maze(14.0, {7.0, 7.0, 0.0}, {10.0, 7.0}));
  const auto r = bug::run_orient(at(7.0, 7.0, 0.0), w, {10.0});
  CHECK(r.terminated);
  CHECK(r.ticks == 0);
  CHECK(r.final_state.x == 7.0);
  CHECK(r.final_state.heading == 0.0);
}

TEST_CASE("orient: target behind turns half a revolution counterclockwise in place") {
  const World w(empty_maze(14.0, {7.0, 7.0, 0.0}, {4.0, 7.0}));
  const auto r = bug::run_orient(at(7.0, 7.0, 0.0), w, {60.0});
  REQUIRE(r.terminated);
  CHECK(std::abs(r.final_state.x - 7.0) < 1e-6);
  CHECK(std::abs(r.final_state.y - 7.0) < 1e-6);
  CHECK(std::abs(bearing_to(r.final_state, {4.0, 7.0})) < 0.02);
  // Headings visited rise monotonically from 0 towards pi.
  CHECK(r.final_state.heading == doctest::Approx(kPi).epsilon(0.02 / kPi));
}

TEST_CASE("orient: random poses end aligned") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Vec2 target{rng.uniform(1.0, 13.0), rng.uniform(1.0, 13.0)};
    const RobotState s = at(rng.uniform(1.0, 13.0), rng.uniform(1.0, 13.0), rng.uniform(0.0, kTwoPi));
    if (distance(s.position(), target) < 0.5) continue;
    const World w(empty_maze(14.0, {s.x, s.y, s.heading}, target));
    const auto r = bug::run_orient(s, w, {60.0});
    REQUIRE(r.terminated);
    CHECK(std::abs(bearing_to(r.final_state, target)) < 0.02);
  }
}

TEST_CASE("forward: clear line reaches the target") {
  const World w(empty_maze(14.0, {2.0, 7.0, 0.0}, {10.0, 7.0}));
  const auto r = bug::run_forward(at(2.0, 7.0, 0.0), w, {100.0});
  REQUIRE(r.terminated);
  CHECK(r.forward_reason == ForwardStop::target);
  CHECK(distance(r.final_state.position(), {10.0, 7.0}) < robot::kTargetRadius);
}

TEST_CASE("forward: wall in the way stops at the standoff facing it") {
  Maze m = empty_maze(14.0, {2.0, 7.0, 0.0}, {10.0, 7.0});
  m.walls.push_back({{6.0, 5.0}, {6.1, 9.0}});
  const World w(m);
  const auto r = bug::run_forward(at(2.0, 7.0, 0.0), w, {100.0});
  REQUIRE(r.terminated);
  CHECK(r.forward_reason == ForwardStop::contact);
  CHECK_FALSE(r.final_state.crashed);
  const auto ahead = raycast(m, r.final_state.position(), r.final_state.heading, 2.0);
  REQUIRE(ahead);
  const double gap = *ahead - robot::kRadius;
  CHECK(gap >= 0.05);
  CHECK(gap <= bug::PrimitiveParams{}.standoff + 0.02 + 1e-9);
}

TEST_CASE("forward: passing the target stops at the closest approach") {
  // Line y = 5, target at (6, 6): intensity peaks at the foot point x = 6.
  const World w(empty_maze(14.0, {2.0, 5.0, 0.0}, {6.0, 6.0}));
  const auto r = bug::run_forward(at(2.0, 5.0, 0.0), w, {100.0});
  REQUIRE(r.terminated);
  CHECK(r.forward_reason == ForwardStop::local_max);
  const double tick = robot::kMaxWheelSpeed * 0.1;
  CHECK(std::abs(r.final_state.x - 6.0) <= tick + 1e-9);
}

TEST_CASE("follow: straight wall, target past its end") {
  // Wall on the left while driving east below it; beyond the east end the
  // path bends north, away from the target at (12, 3).
  Maze m = empty_maze(14.0, {4.0, 4.765, 0.0}, {12.0, 3.0});
  m.walls.push_back({{3.0, 5.0}, {9.0, 5.1}});
  const World w(m);
  const auto r = bug::run_follow(at(4.0, 5.0 - robot::kRadius - 0.15, 0.0), w, {200.0});
  REQUIRE(r.terminated);
  CHECK(r.final_state.x > 8.7);
  CHECK(r.final_state.x < 9.6);
  CHECK(r.final_state.y < 5.2);
  // Oracle: along the walked path the intensity is highest near the stop.
  double best = 0.0;
  Vec2 best_at{};
  for (auto p : r.path) {
    const double h = bug::intensity(distance(p, {12.0, 3.0}));
    if (h > best) best = h, best_at = p;
  }
  CHECK(distance(best_at, r.final_state.position()) <= 0.05);
}

TEST_CASE("follow: standoff is held and the motion is counterclockwise") {
  const Maze m = square_obstacle_maze();
  const World w(m);
  const SensorConfig sensors = SensorConfig::ibug24();  // Follow keeps a reference
  bug::Follow follow(sensors);
  Simulator sim(w, at(6.0 - robot::kRadius - 0.15, 7.0, 1.5 * kPi), sensors, {400.0});
  follow.start(sim.observation());
  std::vector<Vec2> path{sim.state().position()};
  int in_band = 0, ticks = 0;
  while (!sim.out_of_time() && !sim.state().crashed) {
    sim.apply(follow.command(sim.observation(), 0.1));
    path.push_back(sim.state().position());
    const double gap = w.clearance(sim.state().position(), 10.0) - robot::kRadius;
    ++ticks;
    in_band += gap >= 0.05 && gap <= 0.3;
  }
  CHECK_FALSE(sim.state().crashed);
  CHECK(static_cast<double>(in_band) / ticks >= 0.95);
  // Several laps, all counterclockwise around the square's centre.
  CHECK(winding(path, {7.0, 7.0}) > 2.0 * kTwoPi);
}

TEST_CASE("I-Bug: empty arena is a near-straight shot") {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Pose s{rng.uniform(1.0, 13.0), rng.uniform(1.0, 13.0), rng.uniform(0.0, kTwoPi)};
    const Vec2 t{rng.uniform(1.0, 13.0), rng.uniform(1.0, 13.0)};
    if (distance(s.position(), t) < 2.0) continue;
    const auto sc = eval::make_scenario("empty", empty_maze(14.0, s, t));
    const auto r = bug::run_ibug(*sc.world, {300.0});
    REQUIRE(r.solved);
    CHECK(r.trajectory_length / sc.astar_m < 1.15);
  }
}

TEST_CASE("I-Bug and Com go around a convex obstacle") {
  const auto sc = eval::make_scenario("square", square_obstacle_maze());
  bug::IbugController ib(SensorConfig::ibug24(), 0.1);
  const auto r = run_episode(ib, *sc.world, {300.0}, SensorConfig::ibug24(), InputMask::full, {true, std::nullopt});
  REQUIRE(r.solved);
  CHECK_FALSE(r.crashed);
  // approach + partial boundary + departure: longer than A*, far below a lap.
  CHECK(r.trajectory_length > sc.astar_m);
  CHECK(r.trajectory_length < sc.astar_m + 4.0);
  CHECK(winding(r.trajectory, {7.0, 7.0}) > 0.0);
  CHECK(ib.forward_trace().size() >= 2);

  const auto c = bug::run_com(*sc.world, {300.0});
  CHECK(c.solved);
}

TEST_CASE("Com: empty arena") {
  const auto sc = eval::make_scenario("empty", empty_maze(14.0, {2.0, 2.0, 1.0}, {11.0, 9.0}));
  const auto r = bug::run_com(*sc.world, {300.0});
  REQUIRE(r.solved);
  CHECK(r.trajectory_length / sc.astar_m < 1.15);
}

TEST_CASE("loop trap: Com circles until the time limit, I-Bug escapes") {
  const World w(bug::loop_trap_maze());
  const auto com = bug::run_com(w, {300.0});
  CHECK_FALSE(com.solved);
  CHECK_FALSE(com.crashed);
  CHECK(com.elapsed == doctest::Approx(300.0));
  const auto ib = bug::run_ibug(w, {300.0});
  CHECK(ib.solved);
}

TEST_CASE("I-Bug on generated mazes: success rate, path ratio and trace invariants") {
  const auto mazes = eval::generate_scenarios(MazeParams{}, 1000, 50);
  std::vector<EpisodeResult> results(mazes.size());
  std::vector<int> stale(mazes.size(), 0);
  parallel_for(mazes.size(), resolve_jobs(0), [&](std::size_t i) {
    bug::IbugController c(SensorConfig::ibug24(), 0.1);
    results[i] = run_episode(c, *mazes[i].world, {300.0}, SensorConfig::ibug24(), InputMask::full,
                             {false, mazes[i].start});
    double i_hit = c.forward_trace().empty() ? 0.0 : c.forward_trace().front().i_leave;
    for (const auto& rec : c.forward_trace()) {
      if (rec.moved) i_hit = rec.intensity_after;
      stale[i] += std::abs(rec.i_hit_after - i_hit) > 0.0;
    }
  });
  int solved = 0;
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < mazes.size(); ++i) {
    CHECK(stale[i] == 0);
    if (results[i].solved) {
      CHECK(results[i].final_distance < robot::kTargetRadius);
      ++solved;
      ratio_sum += results[i].trajectory_length / mazes[i].astar_m;
    }
  }
  MESSAGE("I-Bug solved " << solved << "/50, mean ratio " << ratio_sum / std::max(solved, 1));
  CHECK(solved >= 43);  // 85 %
  const double mean = ratio_sum / solved;
  CHECK(mean >= 1.5);
  CHECK(mean <= 3.5);
}
