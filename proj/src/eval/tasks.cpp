#include <cmath>
#include <numbers>

#include "navevo/error.hpp"
#include "navevo/eval.hpp"
#include "navevo/robot.hpp"

namespace navevo::eval {

const char* to_string(Task task) { return task == Task::bearing ? "bearing" : "nobearing"; }

std::optional<Task> task_from_string(std::string_view s) {
  if (s == "bearing") return Task::bearing;
  if (s == "nobearing") return Task::nobearing;
  return std::nullopt;
}

TaskSpec task_spec(Task task) {
  TaskSpec spec;
  spec.task = task;
  if (task == Task::bearing) {
    spec.sensors = SensorConfig::evolved12();
    spec.mask = InputMask::full;
    spec.inputs = static_cast<int>(spec.sensors.count()) + 3;
  } else {
    spec.sensors = SensorConfig::evolved12();
    spec.mask = InputMask::range_only;
    spec.inputs = 1;
  }
  return spec;
}

Scenario make_scenario(std::string id, Maze maze) {
  const auto astar = astar_length(maze, maze.start.position(), maze.target, default_resolution(maze.side));
  if (!astar) throw Error("maze " + id + " has no A* path from start to target");
  Scenario s;
  s.id = std::move(id);
  s.start = maze.start;
  s.astar_m = *astar;
  s.world = std::make_shared<const World>(std::move(maze));
  return s;
}

std::vector<Scenario> generate_scenarios(const MazeParams& params, std::uint64_t seed, int count) {
  std::vector<Scenario> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(make_scenario(std::to_string(k), generate_maze(params, seed + static_cast<std::uint64_t>(k))));
  }
  return out;
}

std::vector<Scenario> training_mazes(const MazeParams& params, std::uint64_t master_seed, int generation, int count) {
  constexpr std::uint64_t kTrainingStream = 0x747261696e;
  std::vector<Scenario> out;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t seed =
        derive_seed(master_seed, {kTrainingStream, static_cast<std::uint64_t>(generation), static_cast<std::uint64_t>(k)});
    out.push_back(make_scenario("g" + std::to_string(generation) + "-" + std::to_string(k), generate_maze(params, seed)));
  }
  return out;
}

std::vector<Scenario> nobearing_scenarios() {
  const Maze arena = empty_maze(kNoBearingSide, Pose{1.0, 1.0, 0.0}, Vec2{9.0, 9.0});
  const Scenario base = make_scenario("arena", arena);
  std::vector<Scenario> out;
  for (int k = 0; k < kNoBearingOrientations; ++k) {
    Scenario s = base;
    s.id = "heading" + std::to_string(k);
    s.start.theta = wrap_two_pi(std::numbers::pi / 4.0 + kTwoPi * k / kNoBearingOrientations);
    out.push_back(std::move(s));
  }
  return out;
}

double input_range_scale(Task task, double arena_side) {
  return task == Task::nobearing ? 1.0 : arena_diagonal(arena_side);
}

void network_inputs(const Observation& obs, Task task, double range_scale, std::vector<double>& out) {
  out.clear();
  if (task == Task::bearing) out.insert(out.end(), obs.proximity.begin(), obs.proximity.end());
  out.push_back(obs.target_range / range_scale);
  if (task == Task::bearing) {
    out.push_back(obs.bearing_cw);
    out.push_back(obs.bearing_ccw);
  }
}

NetworkController::NetworkController(const neat::Genome& genome, Task task, double range_scale)
    : net_(genome), task_(task), range_scale_(range_scale) {
  if (net_.input_count() != task_spec(task).inputs || net_.output_count() != 2) {
    throw Error("genome arity does not match the " + std::string(to_string(task)) + " task");
  }
}

void NetworkController::reset() { net_.reset(); }

WheelSpeeds NetworkController::act(const Observation& obs) {
  network_inputs(obs, task_, range_scale_, inputs_);
  const auto& out = net_.activate(inputs_);
  return {neat::wheel_speed(out[0], robot::kMaxWheelSpeed), neat::wheel_speed(out[1], robot::kMaxWheelSpeed)};
}

}  // namespace navevo::eval
