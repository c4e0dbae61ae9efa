#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navevo/eval.hpp"
#include "navevo/maze.hpp"
#include "navevo/neat.hpp"

namespace navevo::harness {

// --- configuration -------------------------------------------------------------

struct ExperimentConfig {
  eval::Task task = eval::Task::bearing;
  bool gru_enabled = true;
  int population_size = 150;
  int generations = 1000;
  double time_limit_s = 300.0;
  int training_mazes = 10;
  MazeParams maze;
  neat::ReproductionParams reproduction;
  int test_every = 25;
  int test_count = 209;
  std::uint64_t test_seed = 9001;
  std::uint64_t master_seed = 1;
  std::string output_dir = "run";
};

/// Defaults for a task: bearing uses 1000 generations, 300 s, node/GRU rates
/// 0.005/0.003, power 1.5, survival 0.55; no-bearing uses 5000 generations,
/// 80 s, rates 0.006/0.006, power 0.5, survival 0.4. Crossover is on only
/// without GRU nodes.
ExperimentConfig default_config(eval::Task task, bool gru_enabled);

/// Parses `key = value` lines. `task` and `gru_enabled` select the defaults;
/// every other key overrides one field. Unknown keys, duplicates and bad
/// values are errors naming the line.
ExperimentConfig config_from_text(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
/// Canonical snapshot listing every key; parses back to the same config.
std::string to_text(const ExperimentConfig& config);
void check(const ExperimentConfig& config);

// --- run state and checkpoints ---------------------------------------------------

struct LogRow {
  int generation = 0;  // 1-based
  double avg_fitness = 0.0;
  double max_fitness = 0.0;
  double best_so_far = 0.0;
  int species_count = 0;
  double gru_node_mean = 0.0;
  int max_solved = 0;  // most scenarios solved by one genome
};

struct TestRow {
  int generation = 0;         // 1-based generation at which the test ran
  int source_generation = 0;  // 1-based generation the champion was ranked in
  int rank = 0;
  std::uint64_t genome_id = 0;
  eval::TestSetReport report;
};

struct RunState {
  neat::Population population;  // ready for generation `population.generation`
  std::vector<LogRow> log;
  std::vector<eval::GenerationTop> history;  // at most the last 3
  std::vector<TestRow> tests;
  std::optional<neat::Genome> best;  // best training fitness so far
};

std::string checkpoint_to_text(const RunState& state);
RunState checkpoint_from_text(std::string_view text, const std::string& source = "<checkpoint>");

// --- experiment -----------------------------------------------------------------

struct RunOptions {
  int jobs = 0;
  bool resume = false;
  bool quiet = false;
  /// Stop after this many generations in this invocation (tests of resume).
  std::optional<int> stop_after;
};

/// Runs (or resumes) an experiment and writes into config.output_dir:
/// config.txt, fitness_log.csv, fitness.svg, test_reports.csv, champions/,
/// best.genome, summary.txt, checkpoint.json and metadata.json (the only
/// file holding wall-clock data).
RunState run_experiment(const ExperimentConfig& config, const RunOptions& options);

std::string fitness_log_csv(const std::vector<LogRow>& rows);
std::vector<LogRow> parse_fitness_log(std::string_view csv, const std::string& source);
std::string test_reports_csv(const std::vector<TestRow>& rows);

/// Report CSV (genome_id, mazes_total, solved, success_pct, ratio_mean,
/// ratio_median) and per-maze detail CSV.
std::string report_csv(const std::string& genome_id, const eval::TestSetReport& report);
std::string report_detail_csv(const eval::TestSetReport& report);
/// Baseline CSV: one row per maze.
std::string baseline_csv(eval::Baseline algo, const eval::TestSetReport& report);

/// Line chart of fitness logs. `columns` picks from "avg", "max" and "best".
std::string plot_svg(const std::vector<std::pair<std::string, std::vector<LogRow>>>& series,
                     const std::vector<std::string>& columns, const std::string& title);

// --- maze sets -------------------------------------------------------------------

/// Writes maze_000.maze ... and index.csv (maze_id, file, astar_m).
void write_maze_set(const std::vector<eval::Scenario>& mazes, const std::string& dir);
/// Reads a directory written by write_maze_set.
std::vector<eval::Scenario> read_maze_set(const std::string& dir);

// --- command line -----------------------------------------------------------------

/// Entry point of the `navevo` tool; returns the process exit status.
int cli_main(int argc, char** argv);

}  // namespace navevo::harness
