#pragma once

#include <optional>
#include <vector>

#include "navevo/sim.hpp"

namespace navevo::bug {

/// Beacon signal strength h(d) = 1 / (1 + d): 1 at the target, strictly
/// decreasing with distance.
double intensity(double distance);

struct PrimitiveParams {
  double standoff = 0.15;          // body-to-wall gap held while following
  double alignment_tolerance = 0.02;
  double hysteresis = 1e-6;        // intensity change below this is ignored
  double follow_gain_distance = 4.0;
  double follow_gain_bearing = 1.5;
  double contact_range = 0.35;     // beyond standoff, a wall still counts as "in contact"
};

/// Flags a local maximum of a sampled signal: a drop after at least one rise.
class LocalMaxDetector {
public:
  explicit LocalMaxDetector(double hysteresis = 1e-6) : hysteresis_(hysteresis) {}

  void reset(double value);
  /// Feeds the next sample; true when it completes a rise-then-drop.
  bool update(double value);

private:
  double hysteresis_;
  double last_ = 0.0;
  bool rose_ = false;
};

/// Obstacle points recovered from a proximity observation, in the robot frame.
struct RangePoint {
  double angle;   // sensor angle
  double rho;     // distance from the robot center
  double bearing; // direction of the point from the center
  double x, y;
};
std::vector<RangePoint> range_points(const Observation& obs, const SensorConfig& sensors);

/// Free gap ahead of the body inside its swept corridor (INFINITY if none seen).
double front_gap(const std::vector<RangePoint>& points, double lateral_margin = 0.02);

/// Converts a desired (v, omega) into wheel speeds, scaling both wheels down
/// together so that neither exceeds the wheel limit.
WheelSpeeds twist(double v, double omega);

/// u_ori: rotate counterclockwise in place until the target bearing is within
/// the alignment tolerance.
class Orient {
public:
  explicit Orient(PrimitiveParams params = {}) : params_(params) {}
  void start(const Observation&) {}
  std::optional<WheelSpeeds> step(const Observation& obs, double dt);

private:
  PrimitiveParams params_;
};

enum class ForwardStop { contact, target, local_max };

/// u_fwd: drive straight ahead until frontal contact at the standoff, the
/// target, or a local maximum of intensity along the line of motion.
class Forward {
public:
  Forward(const SensorConfig& sensors, PrimitiveParams params = {})
      : sensors_(&sensors), params_(params), detector_(params.hysteresis) {}
  void start(const Observation& obs);
  std::optional<WheelSpeeds> step(const Observation& obs);
  ForwardStop reason() const { return reason_; }

private:
  const SensorConfig* sensors_;
  PrimitiveParams params_;
  LocalMaxDetector detector_;
  ForwardStop reason_ = ForwardStop::contact;
};

/// Counterclockwise boundary following with the obstacle on the left, held at
/// the standoff by a proportional law on the nearest left-side obstacle point.
/// When the wall is lost the robot arcs left around the last contact.
class Follow {
public:
  Follow(const SensorConfig& sensors, PrimitiveParams params = {})
      : sensors_(&sensors), params_(params), detector_(params.hysteresis) {}

  void start(const Observation& obs);
  /// Terminates at a local maximum of intensity unless `until_local_max` is off.
  std::optional<WheelSpeeds> step(const Observation& obs, double dt, bool until_local_max = true);

  /// Command without any termination logic.
  WheelSpeeds command(const Observation& obs, double dt);

  /// Distance from the body to the nearest obstacle seen on the previous tick.
  double last_gap() const { return last_gap_; }
  int lost_events() const { return lost_events_; }

private:
  const SensorConfig* sensors_;
  PrimitiveParams params_;
  LocalMaxDetector detector_;
  struct Mark {
    double x, y;  // robot frame
    int age;
  };

  void remember(const std::vector<RangePoint>& pts, double dt);

  double lost_time_ = 0.0;
  bool lost_ = false;
  int lost_events_ = 0;
  double last_gap_ = INFINITY;
  // Recent hits carried along by the commanded ego-motion, so walls that
  // slip out of the sparse rear rays stay in view around corners.
  std::vector<Mark> marks_;
  std::optional<WheelSpeeds> last_command_;
};

enum class Phase { orienting, forwarding, following };

struct IbugState {
  double i_leave = 0.0;  // intensity recorded before each forward motion
  double i_hit = 0.0;    // intensity at the most recent obstacle contact
  Phase phase = Phase::orienting;
  double last_intensity = 0.0;
};

/// One forward phase of Algorithm 1, recorded for trace inspection.
struct ForwardRecord {
  double time = 0.0;  // simulated time at which u_fwd ended
  double i_leave = 0.0;
  double intensity_after = 0.0;
  bool moved = false;
  ForwardStop reason = ForwardStop::contact;
  double i_hit_after = 0.0;
};

/// Algorithm 1 (I-Bug) as a per-tick state machine:
///   loop { i_L <- h; u_ori; u_fwd; if at target stop;
///          if i_L != h then i_H <- h; do u_fol while h <= i_H }
class IbugController final : public Controller {
public:
  IbugController(SensorConfig sensors, double control_dt, PrimitiveParams params = {});

  void reset() override;
  WheelSpeeds act(const Observation& obs) override;

  const IbugState& state() const { return state_; }
  const std::vector<ForwardRecord>& forward_trace() const { return trace_; }

private:
  void begin_iteration(const Observation& obs);
  void after_forward(const Observation& obs);

  SensorConfig sensors_;
  double dt_;
  PrimitiveParams params_;
  Orient orient_;
  Forward forward_;
  Follow follow_;
  IbugState state_;
  double time_ = 0.0;
  bool started_ = false;
  std::vector<ForwardRecord> trace_;
};

enum class ComMode { to_target, boundary_following };

struct ComState {
  ComMode mode = ComMode::to_target;
  double hit_time = 0.0;
  double followed = 0.0;  // time spent on the current boundary
};

/// Com: head for the target; on contact follow the boundary to the left and
/// leave as soon as the straight line towards the target is clear for
/// `lookahead` meters.
class ComController final : public Controller {
public:
  ComController(SensorConfig sensors, double control_dt, PrimitiveParams params = {}, double lookahead = 1.0);

  void reset() override;
  WheelSpeeds act(const Observation& obs) override;
  const ComState& state() const { return state_; }

  /// True if the body corridor towards the target is free for `lookahead`.
  bool target_line_clear(const Observation& obs) const;

private:
  SensorConfig sensors_;
  double dt_;
  PrimitiveParams params_;
  double lookahead_;
  Follow follow_;
  ComState state_;
  double time_ = 0.0;
};

EpisodeResult run_ibug(const World& world, const EpisodeLimits& limits, const EpisodeOptions& options = {});
EpisodeResult run_com(const World& world, const EpisodeLimits& limits, const EpisodeOptions& options = {});

/// 8 m arena with a shelf wall hanging off the east side and the target just
/// above it. Com keeps leaving the shelf toward the target and re-hitting it
/// from below; I-Bug escapes around the perimeter.
Maze loop_trap_maze();

// --- standalone primitive execution ------------------------------------------------------

struct PrimitiveRun {
  RobotState final_state;
  int ticks = 0;
  bool terminated = false;  // false means the time limit cut it short
  std::vector<Vec2> path;
  std::vector<double> gaps;  // body-to-nearest-wall gap each tick (follow only)
  ForwardStop forward_reason = ForwardStop::contact;
};

PrimitiveRun run_orient(const RobotState& start, const World& world, const EpisodeLimits& limits,
                        PrimitiveParams params = {});
PrimitiveRun run_forward(const RobotState& start, const World& world, const EpisodeLimits& limits,
                         PrimitiveParams params = {});
PrimitiveRun run_follow(const RobotState& start, const World& world, const EpisodeLimits& limits,
                        PrimitiveParams params = {});

}  // namespace navevo::bug
