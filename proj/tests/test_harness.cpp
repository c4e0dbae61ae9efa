#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "navevo/error.hpp"
#include "navevo/harness.hpp"
#include "navevo/text.hpp"

using namespace navevo;
using namespace navevo::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("navevo_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Every output file except metadata.json (wall-clock data), keyed by path.
// The output_dir line of config.txt is dropped so runs in different
// directories compare equal.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "metadata.json") continue;
    std::string body = text::read_file(e.path().string());
    if (e.path().filename() == "config.txt") {
      const auto at = body.find("output_dir =");
      REQUIRE(at != std::string::npos);
      body.erase(at, body.find('\n', at) - at);
    }
    files[fs::relative(e.path(), dir).string()] = body;
  }
  return files;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "navevo");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

ExperimentConfig tiny(const fs::path& dir) {
  ExperimentConfig c = default_config(eval::Task::bearing, true);
  c.population_size = 16;
  c.generations = 4;
  c.time_limit_s = 20.0;
  c.training_mazes = 2;
  c.maze.side_m = 8.0;
  c.test_every = 2;
  c.test_count = 3;
  c.master_seed = 5;
  c.output_dir = dir.string();
  return c;
}

void require_parse_error(std::string_view src, int line) {
  try {
    config_from_text(src, "cfg");
    FAIL("accepted: " << src);
  } catch (const ParseError& e) {
    CHECK(e.source() == "cfg");
    CHECK(e.line() == line);
  }
}

}  // namespace

TEST_CASE("task defaults") {
  const auto b = default_config(eval::Task::bearing, true);
  CHECK(b.generations == 1000);
  CHECK(b.time_limit_s == 300.0);
  CHECK(b.reproduction.survival_threshold == 0.55);
  CHECK(b.reproduction.mutation.weight_power == 1.5);
  CHECK(b.reproduction.mutation.add_gru_prob == 0.003);
  CHECK_FALSE(b.reproduction.crossover);
  const auto n = default_config(eval::Task::nobearing, false);
  CHECK(n.generations == 5000);
  CHECK(n.time_limit_s == 80.0);
  CHECK(n.reproduction.survival_threshold == 0.4);
  CHECK(n.reproduction.mutation.gru_power == 0.5);
  CHECK_FALSE(n.reproduction.mutation.gru_enabled);
  CHECK(n.reproduction.crossover);
  CHECK(n.population_size == 150);
}

TEST_CASE("config text: overrides, comments and round trip") {
  const auto c = config_from_text("# run\ntask = nobearing\n\ngru_enabled = false\ngenerations = 500  # scaled\n"
                                  "master_seed = 42\nweight_power = 0.7\n");
  CHECK(c.task == eval::Task::nobearing);
  CHECK_FALSE(c.gru_enabled);
  CHECK(c.generations == 500);
  CHECK(c.master_seed == 42);
  CHECK(c.reproduction.mutation.weight_power == 0.7);
  CHECK(c.time_limit_s == 80.0);  // task default
  const std::string canon = to_text(c);
  CHECK(to_text(config_from_text(canon)) == canon);
  CHECK(to_text(config_from_text(to_text(default_config(eval::Task::bearing, true)))) ==
        to_text(default_config(eval::Task::bearing, true)));
}

TEST_CASE("config text: errors name the line") {
  require_parse_error("generations = 10\nbogus = 1\n", 2);
  require_parse_error("generations = 10\n\ngenerations = 20\n", 3);
  require_parse_error("task = maze\n", 1);
  require_parse_error("population_size = many\n", 1);
  require_parse_error("generations = 10\njust words\n", 2);
  require_parse_error("gru_enabled = maybe\n", 1);
  CHECK_THROWS_AS(config_from_text("add_node_prob = 1.5\n"), ParseError);
  CHECK_THROWS_AS(config_from_text("generations = 0\n"), ParseError);
}

TEST_CASE("fitness log csv round trip") {
  std::vector<LogRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].generation = i + 1;
    rows[i].avg_fitness = 0.1 * i + 1.0 / 3.0;
    rows[i].max_fitness = 2.0 / 7.0 + i;
    rows[i].best_so_far = rows[i].max_fitness;
    rows[i].species_count = 4 - i;
    rows[i].gru_node_mean = 0.125 * i;
    rows[i].max_solved = i;
  }
  const auto back = parse_fitness_log(fitness_log_csv(rows), "log");
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[i].generation == rows[i].generation);
    CHECK(std::abs(back[i].avg_fitness - rows[i].avg_fitness) < 1e-6);  // six decimals
    CHECK(std::abs(back[i].max_fitness - rows[i].max_fitness) < 1e-6);
    CHECK(back[i].species_count == rows[i].species_count);
    CHECK(back[i].max_solved == rows[i].max_solved);
  }
  CHECK_THROWS_AS(parse_fitness_log("generation,avg\n1,x\n", "log"), ParseError);
}

TEST_CASE("maze set round trip") {
  const fs::path dir = scratch("mazes");
  const auto mazes = eval::generate_scenarios(MazeParams{}, 77, 3);
  write_maze_set(mazes, dir.string());
  const auto back = read_maze_set(dir.string());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].id == mazes[i].id);
    CHECK(std::abs(back[i].astar_m - mazes[i].astar_m) < 1e-9);  // written with 9 decimals
    CHECK(to_text(back[i].world->maze()) == to_text(mazes[i].world->maze()));
  }
  fs::remove_all(dir);
}

TEST_CASE("experiments: reruns are byte-identical, resume continues exactly, thread count is irrelevant") {
  const fs::path a = scratch("run_a"), b = scratch("run_b"), c = scratch("run_c");

  const RunState full = run_experiment(tiny(a), {1, false, true, std::nullopt});
  CHECK(full.log.size() == 4);
  CHECK(full.population.generation == 4);
  CHECK(full.tests.size() == 5 + 6);  // generation 2: 3 + 2 champions; generation 4: 3 + 2 + 1

  // Interrupted after two generations, then resumed.
  const RunState half = run_experiment(tiny(b), {2, false, true, 2});
  CHECK(half.log.size() == 2);
  CHECK(snapshot(b).count("checkpoint.json") == 1);
  CHECK(checkpoint_to_text(checkpoint_from_text(text::read_file((b / "checkpoint.json").string()))) ==
        text::read_file((b / "checkpoint.json").string()));
  run_experiment(tiny(b), {2, true, true, std::nullopt});

  run_experiment(tiny(c), {2, false, true, std::nullopt});

  const auto sa = snapshot(a), sb = snapshot(b), sc = snapshot(c);
  CHECK(sa.size() > 8);
  CHECK(sa.count("best.genome") == 1);
  CHECK(sa == sb);
  CHECK(sa == sc);

  // Best-so-far never decreases.
  for (std::size_t i = 1; i < full.log.size(); ++i) CHECK(full.log[i].best_so_far >= full.log[i - 1].best_so_far);

  // A different seed gives a different run.
  ExperimentConfig other = tiny(c);
  other.master_seed = 6;
  fs::remove_all(c);
  run_experiment(other, {1, false, true, std::nullopt});
  CHECK(snapshot(c) != sa);

  // Resuming under a changed config is refused.
  ExperimentConfig changed = tiny(b);
  changed.population_size = 20;
  CHECK_THROWS_AS(run_experiment(changed, {1, true, true, std::nullopt}), Error);
  CHECK_THROWS_AS(run_experiment(tiny(scratch("empty")), {1, true, true, std::nullopt}), Error);

  for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("command line smoke") {
  const fs::path dir = scratch("cli");
  const std::string mazes = (dir / "mazes").string();
  CHECK(run_cli({"gen-mazes", "--count", "3", "--seed", "9", "--out", mazes}) == 0);
  CHECK(fs::exists(fs::path(mazes) / "index.csv"));
  CHECK(run_cli({"astar", (fs::path(mazes) / "maze_000.maze").string()}) == 0);
  const std::string report = (dir / "ibug.csv").string();
  CHECK(run_cli({"-j", "1", "baseline", "--mazes", mazes, "--algo", "ibug", "--report", report}) == 0);
  CHECK(text::read_file(report).find("maze_id") != std::string::npos);
  const std::string trap = (dir / "trap.maze").string();
  CHECK(run_cli({"trap-maze", "--out", trap}) == 0);
  CHECK(run_cli({"replay", "--maze", trap, "--algo", "com", "--time-limit", "20", "--svg",
                 (dir / "trap.svg").string()}) == 0);

  const std::string run = (dir / "run").string();
  CHECK(run_cli({"-j", "1", "evolve", "--set", "task=nobearing", "--set", "population_size=12", "--set",
                 "generations=2", "--out", run, "--quiet"}) == 0);
  CHECK(fs::exists(fs::path(run) / "best.genome"));
  CHECK(parse_fitness_log(text::read_file((fs::path(run) / "fitness_log.csv").string()), "log").size() == 2);
  CHECK(run_cli({"eval", "--genome", (fs::path(run) / "best.genome").string(), "--mazes", mazes, "--time-limit",
                 "20", "--report", (dir / "eval.csv").string()}) == 0);
  CHECK(run_cli({"plot", "--log", "a=" + (fs::path(run) / "fitness_log.csv").string(), "--out",
                 (dir / "plot.svg").string()}) == 0);
  CHECK(text::read_file((dir / "plot.svg").string()).find("<svg") != std::string::npos);

  // Bad input: non-zero status, no exception.
  CHECK(run_cli({"astar", (dir / "missing.maze").string()}) != 0);
  CHECK(run_cli({"evolve", "--set", "bogus=1", "--out", run}) != 0);
  fs::remove_all(dir);
}
