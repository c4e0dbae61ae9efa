#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navevo/geometry.hpp"
#include "navevo/maze.hpp"

namespace navevo {

/// Immutable maze plus a bucket index over its walls. Safe to share between
/// concurrently running episodes.
class World {
public:
  explicit World(Maze maze);

  const Maze& maze() const { return maze_; }

  /// Appends indices of walls whose rectangles may intersect `box`.
  void candidates(const Rect& box, std::vector<int>& out) const;

  /// Distance from p to the nearest wall, or `cap` if nothing is closer.
  double clearance(Vec2 p, double cap) const;

  bool collides(Vec2 center, double radius) const { return clearance(center, radius) < radius; }

  /// Distance along the ray to the first wall, nullopt beyond max_range.
  std::optional<double> raycast(Vec2 origin, double angle, double max_range) const;

private:
  Maze maze_;
  double bucket_size_;
  int buckets_;
  std::vector<std::vector<int>> index_;
};

/// Ray/rectangle entry distance; 0 if the origin is inside, nullopt on a miss.
std::optional<double> ray_rect(Vec2 origin, Vec2 dir, const Rect& r);

std::optional<double> raycast(const Maze& maze, Vec2 origin, double angle, double max_range);

// --- robot -----------------------------------------------------------------------

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // [0, 2pi)
  double left_speed = 0.0;
  double right_speed = 0.0;
  bool crashed = false;

  Vec2 position() const { return {x, y}; }
  static RobotState at(const Pose& p) { return {p.x, p.y, wrap_two_pi(p.theta), 0.0, 0.0, false}; }
};

struct WheelSpeeds {
  double left = 0.0;
  double right = 0.0;
};

/// Pose reached after driving the constant-twist unicycle arc (v, omega) for t.
Pose arc_pose(const Pose& start, double v, double omega, double t);

/// Chord length of that arc.
double arc_chord(double v, double omega, double t);

struct StepOutcome {
  RobotState state;
  double travelled = 0.0;  // sum of per-substep displacements
  bool contact = false;    // a wall was touched during this step
};

/// Integrates the wheel speeds already stored in `state` for dt, clamping
/// them to the wheel limit. The disc is checked at `substeps` points along
/// the arc; on contact the position is clamped at the first touching point
/// (found by bisection), the remaining rotation is applied in place, and
/// `crashed` latches.
StepOutcome step_robot(const RobotState& state, double dt, const World& world, int substeps = 10);

RobotState step_kinematics(const RobotState& state, double dt, const World& world);
RobotState step_kinematics(const RobotState& state, double dt, const Maze& maze);

// --- sensing -----------------------------------------------------------------------

enum class SensorLayout { evolved12, ibug24 };

struct SensorConfig {
  SensorLayout layout = SensorLayout::evolved12;
  std::vector<double> angles;  // robot frame, 0 = forward, ccw positive
  double range = 0.2;

  std::size_t count() const { return angles.size(); }

  /// 12 rays equally spaced around the body, 0.2 m.
  static SensorConfig evolved12();
  /// 20 rays in a +-60 degree frontal wedge, one at each side (+-90), one
  /// rearward; 2 m.
  static SensorConfig ibug24();
};

/// Proximity rays start at the body rim; 1 = touching, 0 = nothing in range.
/// Bearings: bearing_ccw is the counter-clockwise angle from the heading to
/// the target divided by 2pi, in [0, 1); bearing_cw = 1 - bearing_ccw. A robot
/// facing the target reads ccw 0, cw 1.
struct Observation {
  std::vector<double> proximity;
  double target_range = 0.0;
  double bearing_cw = 1.0;
  double bearing_ccw = 0.0;

  /// Target direction relative to the heading in (-pi, pi], ccw positive.
  double signed_bearing() const { return wrap_pi(bearing_ccw * kTwoPi); }
};

enum class InputMask {
  full,        // proximity, range and bearings
  range_only,  // proximity rays are not cast; bearings still reported
};

Observation observe(const RobotState& state, const World& world, const SensorConfig& config);
void observe_into(const RobotState& state, const World& world, const SensorConfig& config, InputMask mask,
                  Observation& out);

// --- episodes --------------------------------------------------------------------------

/// Maps observations to wheel speeds. reset() is called before every episode.
class Controller {
public:
  virtual ~Controller() = default;
  virtual void reset() = 0;
  virtual WheelSpeeds act(const Observation& obs) = 0;
};

struct EpisodeLimits {
  double time_limit_s = 300.0;
  double control_dt = 0.1;
  int substeps = 10;

  int ticks() const;
};

struct EpisodeResult {
  bool solved = false;
  double trajectory_length = 0.0;
  bool crashed = false;
  double elapsed = 0.0;
  double final_distance = 0.0;
  std::vector<Vec2> trajectory;  // filled only on request, one point per tick
};

struct EpisodeOptions {
  bool record_trajectory = false;
  std::optional<Pose> start;  // overrides maze.start
};

/// Fixed-timestep control loop used by every experiment and by the bug
/// baselines.
class Simulator {
public:
  Simulator(const World& world, RobotState state, SensorConfig sensors, EpisodeLimits limits,
            InputMask mask = InputMask::full);

  const Observation& observation() const { return obs_; }
  const RobotState& state() const { return state_; }
  const World& world() const { return *world_; }
  const SensorConfig& sensors() const { return sensors_; }
  double time() const { return ticks_ * limits_.control_dt; }
  int ticks() const { return ticks_; }
  double trajectory_length() const { return travelled_; }
  double target_distance() const { return distance(state_.position(), world_->maze().target); }
  bool at_target() const;
  bool out_of_time() const { return ticks_ >= limits_.ticks(); }

  /// Runs one control tick with the given command and refreshes the observation.
  void apply(WheelSpeeds command);

private:
  const World* world_;
  RobotState state_;
  SensorConfig sensors_;
  EpisodeLimits limits_;
  InputMask mask_;
  Observation obs_;
  int ticks_ = 0;
  double travelled_ = 0.0;
};

/// observe -> act -> step until the target is within robot::kTargetRadius,
/// the robot touches a wall, or the time limit elapses. A non-finite command
/// counts as a crash.
EpisodeResult run_episode(Controller& controller, const World& world, const EpisodeLimits& limits,
                          const SensorConfig& sensors, InputMask mask, const EpisodeOptions& options = {});

/// Wraps a callable as a stateless controller.
template <typename F>
class FunctionController final : public Controller {
public:
  explicit FunctionController(F f) : f_(std::move(f)) {}
  void reset() override {}
  WheelSpeeds act(const Observation& obs) override { return f_(obs); }

private:
  F f_;
};

// --- reporting -------------------------------------------------------------------------

/// SVG drawing of the maze with an optional trajectory polyline.
std::string render_svg(const Maze& maze, const std::vector<Vec2>& trajectory);

}  // namespace navevo
