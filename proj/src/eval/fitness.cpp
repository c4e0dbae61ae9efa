#include <cmath>

#include "navevo/error.hpp"
#include "navevo/eval.hpp"

namespace navevo::eval {

double arena_diagonal(double side) { return side * std::sqrt(2.0); }

double fitness_bearing(const EpisodeResult& result, double astar_m) {
  if (!(astar_m > 0.0)) throw Error("A* length must be positive");
  double f = 0.0;
  if (result.solved) f = 1.0 / std::sqrt(result.trajectory_length / astar_m);
  return result.crashed ? f / kCrashDivisor : f;
}

double fitness_nobearing(const EpisodeResult& result, double arena_side) {
  const double gap = arena_diagonal(arena_side) - result.final_distance;
  const double f = gap * gap * gap;
  return result.crashed ? f / kCrashDivisor : f;
}

double aggregate_fitness(Task task, const std::vector<EpisodeResult>& results, const std::vector<Scenario>& scenarios) {
  if (results.size() != scenarios.size()) throw Error("one result per scenario expected");
  if (results.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    sum += task == Task::bearing ? fitness_bearing(results[i], scenarios[i].astar_m)
                                 : fitness_nobearing(results[i], scenarios[i].world->maze().side);
  }
  return task == Task::bearing ? sum / static_cast<double>(results.size()) : sum;
}

}  // namespace navevo::eval
