#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "navevo/bug.hpp"
#include "navevo/error.hpp"
#include "navevo/harness.hpp"
#include "navevo/text.hpp"

namespace navevo::harness {

namespace fs = std::filesystem;

namespace {

int jobs_from_env(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("NAVEVO_JOBS")) {
    if (auto v = text::parse_int(env); v && *v > 0) return static_cast<int>(*v);
  }
  return 0;
}

struct MazeSource {
  std::string dir;
  int count = 209;
  std::uint64_t seed = 9001;
  MazeParams params;

  void add_options(CLI::App* app) {
    app->add_option("--mazes", dir, "Directory written by gen-mazes (overrides --count/--seed)");
    app->add_option("--count", count, "Number of generated mazes")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Seed of the first maze; maze k uses seed + k");
    app->add_option("--side", params.side_m, "Maze side in metres");
    app->add_option("--density", params.room_density, "Room density in [0, 1]");
    app->add_option("--loops", params.loop_probability, "Extra-door probability in [0, 1]");
  }

  std::vector<eval::Scenario> load() const {
    if (!dir.empty()) return read_maze_set(dir);
    return eval::generate_scenarios(params, seed, count);
  }
};

void print_report(const std::string& label, const eval::TestSetReport& r) {
  std::cout << label << ": solved " << r.solved << "/" << r.total << " (" << text::fixed(r.success_pct, 1)
            << "%), ratio mean " << text::fixed(r.ratio_mean, 4) << ", median " << text::fixed(r.ratio_median, 4)
            << '\n';
}

eval::Task infer_task(const neat::Genome& g) {
  for (eval::Task t : {eval::Task::bearing, eval::Task::nobearing}) {
    if (eval::task_spec(t).inputs == g.inputs) return t;
  }
  throw Error("genome has " + std::to_string(g.inputs) + " inputs, which matches no task");
}

// Appends key=value overrides, dropping earlier lines that set the same key.
std::string with_overrides(const std::string& base, const std::vector<std::string>& sets) {
  auto key_of = [](std::string_view line) {
    const auto eq = line.find('=');
    return eq == std::string_view::npos ? std::string() : std::string(text::trim(line.substr(0, eq)));
  };
  std::vector<std::string> overridden;
  for (const auto& s : sets) overridden.push_back(key_of(s));
  std::string out;
  std::size_t pos = 0;
  while (pos < base.size()) {
    const std::size_t end = std::min(base.find('\n', pos), base.size());
    const std::string_view line = std::string_view(base).substr(pos, end - pos);
    pos = end + 1;
    const std::string key = key_of(line);
    const bool dropped = !key.empty() && std::find(overridden.begin(), overridden.end(), key) != overridden.end();
    // Keep line numbering stable for error messages.
    out += dropped ? std::string("# overridden: ") + std::string(line) : std::string(line);
    out += '\n';
  }
  for (const auto& s : sets) out += s + '\n';
  return out;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Neuroevolution workbench for maze navigation: bug baselines, NEAT and NEAT-GRU"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("-j,--jobs", jobs, "Worker threads (default: NAVEVO_JOBS or all cores)");

  // gen-mazes
  auto* gen = app.add_subcommand("gen-mazes", "Generate a maze set");
  MazeSource gen_src;
  std::string gen_out;
  gen->add_option("--count", gen_src.count, "Number of mazes")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_src.seed, "Seed of the first maze");
  gen->add_option("--side", gen_src.params.side_m, "Maze side in metres");
  gen->add_option("--density", gen_src.params.room_density, "Room density in [0, 1]");
  gen->add_option("--loops", gen_src.params.loop_probability, "Extra-door probability in [0, 1]");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // trap-maze
  auto* trap = app.add_subcommand("trap-maze", "Write the maze that traps Com in a loop");
  std::string trap_out;
  trap->add_option("--out", trap_out, "Output maze file")->required();

  // baseline
  auto* base = app.add_subcommand("baseline", "Run a bug algorithm on a maze set");
  MazeSource base_src;
  base_src.add_options(base);
  std::string base_algo = "ibug", base_out;
  double base_limit = 300.0;
  base->add_option("--algo", base_algo, "ibug or com")->check(CLI::IsMember({"ibug", "com"}));
  base->add_option("--time-limit", base_limit, "Seconds per maze")->check(CLI::PositiveNumber);
  base->add_option("--report,--out", base_out, "Per-maze CSV");

  // evolve
  auto* evo = app.add_subcommand("evolve", "Run or resume an evolutionary experiment");
  std::string evo_config, evo_out, evo_resume;
  std::vector<std::string> evo_sets;
  bool evo_quiet = false;
  int evo_stop = 0;
  evo->add_option("--config", evo_config, "Config file of key = value lines")->check(CLI::ExistingFile);
  evo->add_option("--set", evo_sets, "Extra key=value overrides, applied after --config");
  evo->add_option("--out", evo_out, "Output directory (overrides output_dir)");
  evo->add_option("--resume", evo_resume, "Resume the run stored in this directory")->check(CLI::ExistingDirectory);
  evo->add_option("--stop-after", evo_stop, "Stop after this many generations")->check(CLI::PositiveNumber);
  evo->add_flag("-q,--quiet", evo_quiet, "No per-generation progress");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a genome on a maze set");
  MazeSource ev_src;
  ev_src.add_options(ev);
  std::string ev_genome, ev_out, ev_detail;
  double ev_limit = 0.0;
  ev->add_option("--genome", ev_genome, "Genome file")->required()->check(CLI::ExistingFile);
  ev->add_option("--time-limit", ev_limit, "Seconds per episode (default: task default)");
  ev->add_option("--report,--out", ev_out, "Report CSV");
  ev->add_option("--detail", ev_detail, "Per-maze CSV");

  // astar
  auto* as = app.add_subcommand("astar", "Shortest grid path length of a maze");
  std::string as_maze;
  as->add_option("--maze,maze", as_maze, "Maze file")->required()->check(CLI::ExistingFile);

  // replay
  auto* rp = app.add_subcommand("replay", "Run one episode and draw the trajectory");
  std::string rp_maze, rp_genome, rp_algo, rp_svg;
  double rp_limit = 300.0;
  rp->add_option("--maze", rp_maze, "Maze file (default: the no-bearing arena)");
  rp->add_option("--genome", rp_genome, "Genome controller")->check(CLI::ExistingFile);
  rp->add_option("--algo", rp_algo, "Bug controller: ibug or com")->check(CLI::IsMember({"ibug", "com"}));
  rp->add_option("--time-limit", rp_limit, "Seconds")->check(CLI::PositiveNumber);
  rp->add_option("--svg", rp_svg, "SVG output")->required();

  // plot
  auto* pl = app.add_subcommand("plot", "Plot fitness logs");
  std::vector<std::string> pl_logs;
  std::string pl_columns = "avg,max", pl_out, pl_title = "fitness";
  pl->add_option("--log", pl_logs, "label=path/to/fitness_log.csv (repeatable)")->required();
  pl->add_option("--columns", pl_columns, "Comma-separated subset of avg,max,best");
  pl->add_option("--title", pl_title, "Chart title");
  pl->add_option("--out", pl_out, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const int workers = jobs_from_env(jobs);

    if (*gen) {
      write_maze_set(gen_src.load(), gen_out);
      std::cout << "wrote " << gen_src.count << " mazes to " << gen_out << '\n';
    } else if (*trap) {
      save_maze(bug::loop_trap_maze(), trap_out);
    } else if (*base) {
      EpisodeLimits limits;
      limits.time_limit_s = base_limit;
      const auto algo = *eval::baseline_from_string(base_algo);
      const auto report = eval::evaluate_baseline(algo, base_src.load(), limits, workers);
      print_report(base_algo, report);
      if (!base_out.empty()) text::write_file(base_out, baseline_csv(algo, report));
    } else if (*evo) {
      std::string src;
      if (!evo_resume.empty()) {
        src = text::read_file((fs::path(evo_resume) / "config.txt").string());
      } else if (!evo_config.empty()) {
        src = text::read_file(evo_config);
      }
      src = with_overrides(src, evo_sets);
      ExperimentConfig config = config_from_text(src, evo_config.empty() ? "<command line>" : evo_config);
      if (!evo_resume.empty()) {
        config.output_dir = evo_resume;
      } else if (!evo_out.empty()) {
        config.output_dir = evo_out;
      }
      RunOptions opts;
      opts.jobs = workers;
      opts.resume = !evo_resume.empty();
      opts.quiet = evo_quiet;
      if (evo_stop > 0) opts.stop_after = evo_stop;
      const RunState state = run_experiment(config, opts);
      std::cout << "generations " << state.log.size() << ", best fitness "
                << (state.best ? text::fixed(state.best->fitness, 6) : "n/a") << ", outputs in " << config.output_dir
                << '\n';
    } else if (*ev) {
      const neat::Genome genome = neat::load_genome(ev_genome);
      const eval::Task task = infer_task(genome);
      EpisodeLimits limits;
      limits.time_limit_s = ev_limit > 0.0 ? ev_limit : default_config(task, true).time_limit_s;
      const auto mazes = task == eval::Task::nobearing ? eval::nobearing_scenarios() : ev_src.load();
      const auto report = eval::evaluate_test_set(genome, task, mazes, limits, workers);
      print_report(fs::path(ev_genome).filename().string(), report);
      if (!ev_out.empty()) text::write_file(ev_out, report_csv(fs::path(ev_genome).stem().string(), report));
      if (!ev_detail.empty()) text::write_file(ev_detail, report_detail_csv(report));
    } else if (*as) {
      const Maze maze = load_maze(as_maze);
      const auto len = astar_length(maze, maze.start.position(), maze.target, default_resolution(maze.side));
      if (!len) {
        std::cout << "no path\n";
        return 1;
      }
      std::cout << text::fixed(*len, 6) << '\n';
    } else if (*rp) {
      if (rp_genome.empty() == rp_algo.empty()) throw Error("replay needs exactly one of --genome or --algo");
      eval::Scenario scenario = rp_maze.empty() ? eval::nobearing_scenarios().front()
                                                : eval::make_scenario(rp_maze, load_maze(rp_maze));
      EpisodeLimits limits;
      limits.time_limit_s = rp_limit;
      std::unique_ptr<Controller> controller;
      SensorConfig sensors = SensorConfig::ibug24();
      InputMask mask = InputMask::full;
      if (!rp_genome.empty()) {
        const neat::Genome genome = neat::load_genome(rp_genome);
        const eval::Task task = infer_task(genome);
        const auto spec = eval::task_spec(task);
        sensors = spec.sensors;
        mask = spec.mask;
        controller = std::make_unique<eval::NetworkController>(
            genome, task, eval::input_range_scale(task, scenario.world->maze().side));
      } else if (rp_algo == "ibug") {
        controller = std::make_unique<bug::IbugController>(sensors, limits.control_dt);
      } else {
        controller = std::make_unique<bug::ComController>(sensors, limits.control_dt);
      }
      EpisodeOptions options;
      options.start = scenario.start;
      options.record_trajectory = true;
      const EpisodeResult r = run_episode(*controller, *scenario.world, limits, sensors, mask, options);
      text::write_file(rp_svg, render_svg(scenario.world->maze(), r.trajectory));
      std::cout << (r.solved ? "solved" : "not solved") << (r.crashed ? ", crashed" : "") << ", trajectory "
                << text::fixed(r.trajectory_length, 3) << " m, time " << text::fixed(r.elapsed, 1) << " s\n";
    } else if (*pl) {
      std::vector<std::pair<std::string, std::vector<LogRow>>> series;
      for (const auto& item : pl_logs) {
        const auto eq = item.find('=');
        const std::string label = eq == std::string::npos ? fs::path(item).parent_path().filename().string()
                                                          : item.substr(0, eq);
        const std::string path = eq == std::string::npos ? item : item.substr(eq + 1);
        series.emplace_back(label, parse_fitness_log(text::read_file(path), path));
      }
      std::vector<std::string> columns;
      std::size_t start = 0;
      while (start <= pl_columns.size()) {
        const auto comma = std::min(pl_columns.find(',', start), pl_columns.size());
        columns.emplace_back(text::trim(std::string_view(pl_columns).substr(start, comma - start)));
        start = comma + 1;
      }
      text::write_file(pl_out, plot_svg(series, columns, pl_title));
    }
  } catch (const std::exception& e) {
    std::cerr << "navevo: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace navevo::harness
