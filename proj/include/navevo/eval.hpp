#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "navevo/maze.hpp"
#include "navevo/neat.hpp"
#include "navevo/sim.hpp"

namespace navevo::eval {

enum class Task { bearing, nobearing };

const char* to_string(Task task);
std::optional<Task> task_from_string(std::string_view s);

// --- fitness -----------------------------------------------------------------

constexpr double kCrashDivisor = 10.0;

/// 1/sqrt(l) with l = trajectory / A* when solved, else 0; crashes divide by 10.
double fitness_bearing(const EpisodeResult& result, double astar_m);
/// (L - d)^3 with L the arena diagonal and d the final target distance;
/// crashes divide by 10.
double fitness_nobearing(const EpisodeResult& result, double arena_side);

double arena_diagonal(double side);

// --- tasks -------------------------------------------------------------------

struct TaskSpec {
  Task task = Task::bearing;
  SensorConfig sensors;
  InputMask mask = InputMask::full;
  int inputs = 0;
  int outputs = 2;
};

/// Bearing: 12 proximity rays, range, clockwise and counter-clockwise
/// bearing (15 inputs). No-bearing: range only (1 input).
TaskSpec task_spec(Task task);

/// One episode setting: a world, the start pose and the A* length used for
/// normalisation.
struct Scenario {
  std::string id;
  std::shared_ptr<const World> world;
  Pose start;
  double astar_m = 0.0;
};

Scenario make_scenario(std::string id, Maze maze);

/// Maze k of a set is generate_maze(params, seed + k).
std::vector<Scenario> generate_scenarios(const MazeParams& params, std::uint64_t seed, int count);

/// The generation's training mazes, derived from (master_seed, generation).
std::vector<Scenario> training_mazes(const MazeParams& params, std::uint64_t master_seed, int generation,
                                     int count = 10);

constexpr double kNoBearingSide = 10.0;
constexpr int kNoBearingOrientations = 5;

/// 10 m empty arena, start (1, 1), target (9, 9); the five starts differ only
/// in heading, pi/4 + 2 pi k / 5.
std::vector<Scenario> nobearing_scenarios();

/// Divisor applied to the range input. Bearing networks see the range as a
/// fraction of the arena diagonal, in line with their other inputs. The
/// no-bearing network gets meters: the range is its only signal and its
/// tick-to-tick change is what it has to sense.
double input_range_scale(Task task, double arena_side);

/// Network inputs for `task` from an observation; the range is divided by
/// `range_scale`.
void network_inputs(const Observation& obs, Task task, double range_scale, std::vector<double>& out);

class NetworkController final : public Controller {
public:
  NetworkController(const neat::Genome& genome, Task task, double range_scale);

  void reset() override;
  WheelSpeeds act(const Observation& obs) override;

private:
  neat::Network net_;
  Task task_;
  double range_scale_;
  std::vector<double> inputs_;
};

// --- evaluation ----------------------------------------------------------------

struct FitnessRecord {
  std::uint64_t genome_id = 0;
  std::vector<EpisodeResult> results;
  double fitness = 0.0;
};

/// Episode fitness aggregated over the scenarios: the mean for the bearing
/// task, the sum over the five orientations for the no-bearing task.
double aggregate_fitness(Task task, const std::vector<EpisodeResult>& results, const std::vector<Scenario>& scenarios);

FitnessRecord evaluate_genome(const neat::Genome& genome, const std::vector<Scenario>& scenarios, Task task,
                              const EpisodeLimits& limits);

/// Evaluates every genome on the same scenarios, in parallel over genomes.
std::vector<FitnessRecord> evaluate_generation(const std::vector<neat::Genome>& genomes,
                                               const std::vector<Scenario>& scenarios, Task task,
                                               const EpisodeLimits& limits, int jobs);

struct MazeOutcome {
  std::string maze_id;
  bool solved = false;
  bool crashed = false;
  double trajectory_m = 0.0;
  double astar_m = 0.0;
  double ratio = 0.0;
  double elapsed_s = 0.0;
};

struct TestSetReport {
  int total = 0;
  int solved = 0;
  double success_pct = 0.0;
  double ratio_mean = 0.0;    // over solved mazes
  double ratio_median = 0.0;  // over solved mazes
  std::vector<MazeOutcome> mazes;
};

using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

TestSetReport summarize(std::vector<MazeOutcome> outcomes);

TestSetReport evaluate_test_set(const ControllerFactory& make, const SensorConfig& sensors, InputMask mask,
                                const std::vector<Scenario>& mazes, const EpisodeLimits& limits, int jobs);
TestSetReport evaluate_test_set(const neat::Genome& genome, Task task, const std::vector<Scenario>& mazes,
                                const EpisodeLimits& limits, int jobs);

enum class Baseline { ibug, com };
std::optional<Baseline> baseline_from_string(std::string_view s);
const char* to_string(Baseline b);
TestSetReport evaluate_baseline(Baseline algo, const std::vector<Scenario>& mazes, const EpisodeLimits& limits, int jobs);

// --- champions -----------------------------------------------------------------

/// Best genomes of one generation, best first.
struct GenerationTop {
  int generation = 0;
  std::vector<neat::Genome> best;
};

struct Champion {
  int generation = 0;  // generation the genome was ranked in
  int rank = 0;        // 0-based rank within that generation
  neat::Genome genome;
};

/// Top three genomes of `genomes` (fitness descending, ties by lower id).
GenerationTop top_of_generation(int generation, const std::vector<neat::Genome>& genomes, int keep = 3);

/// The 3 best of the newest generation, 2 best of the previous one and the
/// best of the one before. `history` is ordered oldest to newest; missing
/// generations or genomes shrink the selection. Duplicates are kept.
std::vector<Champion> select_champions(const std::vector<GenerationTop>& history);

}  // namespace navevo::eval
