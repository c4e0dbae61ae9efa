#include <algorithm>
#include <numeric>

#include "navevo/bug.hpp"
#include "navevo/error.hpp"
#include "navevo/eval.hpp"
#include "navevo/parallel.hpp"

namespace navevo::eval {

namespace {

double range_scale(Task task, const std::vector<Scenario>& scenarios) {
  return scenarios.empty() ? 1.0 : input_range_scale(task, scenarios.front().world->maze().side);
}

EpisodeResult run_scenario(Controller& controller, const Scenario& s, const EpisodeLimits& limits,
                           const SensorConfig& sensors, InputMask mask) {
  EpisodeOptions options;
  options.start = s.start;
  return run_episode(controller, *s.world, limits, sensors, mask, options);
}

}  // namespace

FitnessRecord evaluate_genome(const neat::Genome& genome, const std::vector<Scenario>& scenarios, Task task,
                              const EpisodeLimits& limits) {
  const TaskSpec spec = task_spec(task);
  NetworkController controller(genome, task, range_scale(task, scenarios));
  FitnessRecord rec;
  rec.genome_id = genome.id;
  for (const auto& s : scenarios) rec.results.push_back(run_scenario(controller, s, limits, spec.sensors, spec.mask));
  rec.fitness = aggregate_fitness(task, rec.results, scenarios);
  return rec;
}

std::vector<FitnessRecord> evaluate_generation(const std::vector<neat::Genome>& genomes,
                                               const std::vector<Scenario>& scenarios, Task task,
                                               const EpisodeLimits& limits, int jobs) {
  std::vector<FitnessRecord> out(genomes.size());
  parallel_for(genomes.size(), jobs, [&](std::size_t i) { out[i] = evaluate_genome(genomes[i], scenarios, task, limits); });
  return out;
}

TestSetReport summarize(std::vector<MazeOutcome> outcomes) {
  TestSetReport r;
  r.total = static_cast<int>(outcomes.size());
  std::vector<double> ratios;
  for (const auto& m : outcomes) {
    if (!m.solved) continue;
    ++r.solved;
    ratios.push_back(m.ratio);
  }
  r.success_pct = r.total > 0 ? 100.0 * r.solved / r.total : 0.0;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    r.ratio_mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
    const std::size_t mid = ratios.size() / 2;
    r.ratio_median = ratios.size() % 2 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
  }
  r.mazes = std::move(outcomes);
  return r;
}

TestSetReport evaluate_test_set(const ControllerFactory& make, const SensorConfig& sensors, InputMask mask,
                                const std::vector<Scenario>& mazes, const EpisodeLimits& limits, int jobs) {
  std::vector<MazeOutcome> outcomes(mazes.size());
  parallel_for(mazes.size(), jobs, [&](std::size_t i) {
    const Scenario& s = mazes[i];
    auto controller = make();
    const EpisodeResult r = run_scenario(*controller, s, limits, sensors, mask);
    MazeOutcome& m = outcomes[i];
    m.maze_id = s.id;
    m.solved = r.solved;
    m.crashed = r.crashed;
    m.trajectory_m = r.trajectory_length;
    m.astar_m = s.astar_m;
    m.ratio = r.trajectory_length / s.astar_m;
    m.elapsed_s = r.elapsed;
  });
  return summarize(std::move(outcomes));
}

TestSetReport evaluate_test_set(const neat::Genome& genome, Task task, const std::vector<Scenario>& mazes,
                                const EpisodeLimits& limits, int jobs) {
  const TaskSpec spec = task_spec(task);
  const double scale = range_scale(task, mazes);
  auto make = [&]() -> std::unique_ptr<Controller> { return std::make_unique<NetworkController>(genome, task, scale); };
  return evaluate_test_set(make, spec.sensors, spec.mask, mazes, limits, jobs);
}

std::optional<Baseline> baseline_from_string(std::string_view s) {
  if (s == "ibug") return Baseline::ibug;
  if (s == "com") return Baseline::com;
  return std::nullopt;
}

const char* to_string(Baseline b) { return b == Baseline::ibug ? "ibug" : "com"; }

TestSetReport evaluate_baseline(Baseline algo, const std::vector<Scenario>& mazes, const EpisodeLimits& limits, int jobs) {
  const SensorConfig sensors = SensorConfig::ibug24();
  auto make = [&]() -> std::unique_ptr<Controller> {
    if (algo == Baseline::ibug) return std::make_unique<bug::IbugController>(sensors, limits.control_dt);
    return std::make_unique<bug::ComController>(sensors, limits.control_dt);
  };
  return evaluate_test_set(make, sensors, InputMask::full, mazes, limits, jobs);
}

}  // namespace navevo::eval
