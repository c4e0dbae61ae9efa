#include <cmath>

#include "navevo/robot.hpp"
#include "navevo/sim.hpp"

namespace navevo {

int EpisodeLimits::ticks() const { return static_cast<int>(std::lround(time_limit_s / control_dt)); }

Simulator::Simulator(const World& world, RobotState state, SensorConfig sensors, EpisodeLimits limits,
                     InputMask mask)
    : world_(&world), state_(state), sensors_(std::move(sensors)), limits_(limits), mask_(mask) {
  observe_into(state_, *world_, sensors_, mask_, obs_);
}

bool Simulator::at_target() const { return target_distance() < robot::kTargetRadius; }

void Simulator::apply(WheelSpeeds command) {
  state_.left_speed = command.left;
  state_.right_speed = command.right;
  const StepOutcome step = step_robot(state_, limits_.control_dt, *world_, limits_.substeps);
  state_ = step.state;
  travelled_ += step.travelled;
  ++ticks_;
  observe_into(state_, *world_, sensors_, mask_, obs_);
}

EpisodeResult run_episode(Controller& controller, const World& world, const EpisodeLimits& limits,
                          const SensorConfig& sensors, InputMask mask, const EpisodeOptions& options) {
  controller.reset();
  const Pose start = options.start.value_or(world.maze().start);
  Simulator sim(world, RobotState::at(start), sensors, limits, mask);
  EpisodeResult result;
  if (options.record_trajectory) result.trajectory.push_back(sim.state().position());

  while (!sim.at_target() && !sim.out_of_time() && !sim.state().crashed) {
    const WheelSpeeds cmd = controller.act(sim.observation());
    if (!std::isfinite(cmd.left) || !std::isfinite(cmd.right)) {
      result.crashed = true;
      break;
    }
    sim.apply(cmd);
    if (options.record_trajectory) result.trajectory.push_back(sim.state().position());
  }
  result.solved = sim.at_target();
  result.crashed = result.crashed || sim.state().crashed;
  result.trajectory_length = sim.trajectory_length();
  result.elapsed = sim.time();
  result.final_distance = sim.target_distance();
  return result;
}

}  // namespace navevo
