#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "navevo/error.hpp"
#include "navevo/harness.hpp"
#include "navevo/parallel.hpp"
#include "navevo/random.hpp"
#include "navevo/text.hpp"

namespace navevo::harness {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kReproduceStream = 0x7265707264;
constexpr int kHistoryDepth = 3;

std::string num(double v) { return text::fixed(v, 6); }

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string champion_stem(const TestRow& row) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "gen%04d_from%04d_rank%d", row.generation, row.source_generation, row.rank);
  return buf;
}

EpisodeLimits limits_of(const ExperimentConfig& c) {
  EpisodeLimits l;
  l.time_limit_s = c.time_limit_s;
  return l;
}

std::vector<eval::Scenario> scenarios_for(const ExperimentConfig& c, int generation) {
  if (c.task == eval::Task::nobearing) return eval::nobearing_scenarios();
  return eval::training_mazes(c.maze, c.master_seed, generation, c.training_mazes);
}

std::vector<eval::Scenario> test_set_for(const ExperimentConfig& c) {
  if (c.test_every <= 0) return {};
  if (c.task == eval::Task::nobearing) return eval::nobearing_scenarios();
  return eval::generate_scenarios(c.maze, c.test_seed, c.test_count);
}

std::string summary_text(const ExperimentConfig& c, const RunState& s) {
  std::ostringstream out;
  out << "task " << eval::to_string(c.task) << '\n';
  out << "gru_enabled " << (c.gru_enabled ? "true" : "false") << '\n';
  out << "generations " << s.log.size() << '\n';
  if (!s.log.empty()) {
    const LogRow& last = s.log.back();
    out << "final_avg_fitness " << num(last.avg_fitness) << '\n';
    out << "final_max_fitness " << num(last.max_fitness) << '\n';
    out << "best_so_far " << num(last.best_so_far) << '\n';
    int solved = 0;
    for (const auto& r : s.log) solved = std::max(solved, r.max_solved);
    out << "max_solved " << solved << '\n';
  }
  if (s.best) {
    out << "best_genome_id " << s.best->id << '\n';
    out << "best_hidden_nodes " << s.best->count(neat::NodeKind::hidden) << '\n';
    out << "best_gru_nodes " << s.best->count(neat::NodeKind::gru) << '\n';
  }
  const TestRow* top = nullptr;
  for (const auto& t : s.tests) {
    if (!top || t.report.success_pct > top->report.success_pct ||
        (t.report.success_pct == top->report.success_pct && t.report.ratio_mean < top->report.ratio_mean)) {
      top = &t;
    }
  }
  if (top) {
    out << "best_test " << champion_stem(*top) << " genome " << top->genome_id << " success_pct "
        << num(top->report.success_pct) << " ratio_mean " << num(top->report.ratio_mean) << " ratio_median "
        << num(top->report.ratio_median) << '\n';
  }
  return out.str();
}

void write_outputs(const ExperimentConfig& c, const RunState& s, const fs::path& dir) {
  text::write_file((dir / "fitness_log.csv").string(), fitness_log_csv(s.log));
  text::write_file((dir / "test_reports.csv").string(), test_reports_csv(s.tests));
  text::write_file((dir / "checkpoint.json").string(), checkpoint_to_text(s));
  if (s.best) neat::save_genome(*s.best, (dir / "best.genome").string());
  text::write_file((dir / "summary.txt").string(), summary_text(c, s));
  const std::vector<std::string> columns =
      c.task == eval::Task::nobearing ? std::vector<std::string>{"best"} : std::vector<std::string>{"avg", "max"};
  const std::string label = c.gru_enabled ? "NEAT-GRU" : "NEAT";
  text::write_file((dir / "fitness.svg").string(),
                   plot_svg({{label, s.log}}, columns, std::string(eval::to_string(c.task)) + " fitness"));
}

}  // namespace

RunState run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  check(config);
  const fs::path dir(config.output_dir);
  fs::create_directories(dir / "champions");
  const std::string config_text = to_text(config);
  const fs::path config_path = dir / "config.txt";
  const fs::path checkpoint_path = dir / "checkpoint.json";
  const auto wall_start = std::chrono::steady_clock::now();
  const std::string started = iso_now();

  const eval::TaskSpec spec = eval::task_spec(config.task);
  RunState state;
  if (options.resume) {
    if (!fs::exists(checkpoint_path)) throw Error("nothing to resume: " + checkpoint_path.string() + " is missing");
    if (fs::exists(config_path)) {
      ExperimentConfig recorded = load_config(config_path.string());
      recorded.output_dir = config.output_dir;
      if (to_text(recorded) != config_text) {
        throw Error("config differs from the one recorded in " + config_path.string());
      }
    }
    state = checkpoint_from_text(text::read_file(checkpoint_path.string()), checkpoint_path.string());
  } else {
    state.population = neat::init_population(config.population_size, spec.inputs, spec.outputs,
                                             config.reproduction.compatibility, config.master_seed);
    text::write_file(config_path.string(), config_text);
  }

  const EpisodeLimits limits = limits_of(config);
  const std::vector<eval::Scenario> test_set = test_set_for(config);
  const int jobs = resolve_jobs(options.jobs);
  int done_here = 0;
  neat::Population& pop = state.population;

  while (pop.generation < config.generations) {
    if (options.stop_after && done_here >= *options.stop_after) break;
    const int gen = pop.generation;  // 0-based
    const auto scenarios = scenarios_for(config, gen);
    const auto records = eval::evaluate_generation(pop.genomes, scenarios, config.task, limits, jobs);

    LogRow row;
    row.generation = gen + 1;
    double sum = 0.0, gru = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      neat::Genome& g = pop.genomes[i];
      g.fitness = records[i].fitness;
      sum += g.fitness;
      gru += g.count(neat::NodeKind::gru);
      const int solved = static_cast<int>(std::count_if(records[i].results.begin(), records[i].results.end(),
                                                        [](const EpisodeResult& r) { return r.solved; }));
      row.max_solved = std::max(row.max_solved, solved);
    }
    const auto order = neat::ranked(pop.genomes);
    row.avg_fitness = sum / static_cast<double>(pop.genomes.size());
    row.max_fitness = order.front()->fitness;
    row.gru_node_mean = gru / static_cast<double>(pop.genomes.size());
    row.species_count = static_cast<int>(pop.species.size());
    if (!state.best || order.front()->fitness > state.best->fitness) state.best = *order.front();
    row.best_so_far = state.best->fitness;
    state.log.push_back(row);

    state.history.push_back(eval::top_of_generation(gen + 1, pop.genomes));
    if (state.history.size() > kHistoryDepth) state.history.erase(state.history.begin());

    if (config.test_every > 0 && (gen + 1) % config.test_every == 0) {
      for (const auto& champ : eval::select_champions(state.history)) {
        TestRow t;
        t.generation = gen + 1;
        t.source_generation = champ.generation;
        t.rank = champ.rank;
        t.genome_id = champ.genome.id;
        t.report = eval::evaluate_test_set(champ.genome, config.task, test_set, limits, jobs);
        const fs::path stem = dir / "champions" / champion_stem(t);
        neat::save_genome(champ.genome, stem.string() + ".genome");
        text::write_file(stem.string() + ".csv", report_detail_csv(t.report));
        state.tests.push_back(std::move(t));
      }
    }

    Rng rng(derive_seed(config.master_seed, {kReproduceStream, static_cast<std::uint64_t>(gen)}));
    neat::reproduce(pop, config.reproduction, rng);
    ++done_here;

    write_outputs(config, state, dir);
    if (!options.quiet) {
      std::cerr << "gen " << row.generation << "/" << config.generations << " avg " << num(row.avg_fitness) << " max "
                << num(row.max_fitness) << " best " << num(row.best_so_far) << " solved " << row.max_solved
                << " species " << row.species_count << '\n';
    }
  }
  write_outputs(config, state, dir);

  nlohmann::json meta;
  meta["started"] = started;
  meta["finished"] = iso_now();
  meta["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  meta["generations_this_invocation"] = done_here;
  meta["jobs"] = jobs;
  meta["resumed"] = options.resume;
  text::write_file((dir / "metadata.json").string(), meta.dump(2) + "\n");
  return state;
}

// --- CSV and plots ----------------------------------------------------------------

std::string fitness_log_csv(const std::vector<LogRow>& rows) {
  std::ostringstream out;
  out << "generation,avg_fitness,max_fitness,best_so_far,species_count,gru_node_mean,max_solved\n";
  for (const auto& r : rows) {
    out << r.generation << ',' << num(r.avg_fitness) << ',' << num(r.max_fitness) << ',' << num(r.best_so_far) << ','
        << r.species_count << ',' << num(r.gru_node_mean) << ',' << r.max_solved << '\n';
  }
  return out.str();
}

std::vector<LogRow> parse_fitness_log(std::string_view csv, const std::string& source) {
  std::vector<LogRow> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t end = std::min(csv.find('\n', pos), csv.size());
    const std::string_view line = text::trim(csv.substr(pos, end - pos));
    pos = end + 1;
    if (++line_no == 1 || line.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 7) throw ParseError(source, line_no, "expected 7 columns");
    auto d = [&](std::size_t k) {
      auto v = text::parse_double(cells[k]);
      if (!v) throw ParseError(source, line_no, "bad number '" + std::string(cells[k]) + "'");
      return *v;
    };
    auto i = [&](std::size_t k) {
      auto v = text::parse_int(cells[k]);
      if (!v) throw ParseError(source, line_no, "bad integer '" + std::string(cells[k]) + "'");
      return static_cast<int>(*v);
    };
    rows.push_back({i(0), d(1), d(2), d(3), i(4), d(5), i(6)});
  }
  return rows;
}

std::string test_reports_csv(const std::vector<TestRow>& rows) {
  std::ostringstream out;
  out << "generation,source_generation,rank,genome_id,mazes_total,solved,success_pct,ratio_mean,ratio_median\n";
  for (const auto& t : rows) {
    out << t.generation << ',' << t.source_generation << ',' << t.rank << ',' << t.genome_id << ',' << t.report.total
        << ',' << t.report.solved << ',' << num(t.report.success_pct) << ',' << num(t.report.ratio_mean) << ','
        << num(t.report.ratio_median) << '\n';
  }
  return out.str();
}

std::string report_csv(const std::string& genome_id, const eval::TestSetReport& r) {
  std::ostringstream out;
  out << "genome_id,mazes_total,solved,success_pct,ratio_mean,ratio_median\n";
  out << genome_id << ',' << r.total << ',' << r.solved << ',' << num(r.success_pct) << ',' << num(r.ratio_mean) << ','
      << num(r.ratio_median) << '\n';
  return out.str();
}

std::string report_detail_csv(const eval::TestSetReport& r) {
  std::ostringstream out;
  out << "maze_id,solved,trajectory_m,astar_m,ratio,crashed,elapsed_s\n";
  for (const auto& m : r.mazes) {
    out << m.maze_id << ',' << (m.solved ? 1 : 0) << ',' << num(m.trajectory_m) << ',' << num(m.astar_m) << ','
        << num(m.ratio) << ',' << (m.crashed ? 1 : 0) << ',' << num(m.elapsed_s) << '\n';
  }
  return out.str();
}

std::string baseline_csv(eval::Baseline algo, const eval::TestSetReport& r) {
  std::ostringstream out;
  out << "maze_id,algorithm,solved,trajectory_m,astar_m,ratio,crashed,elapsed_s\n";
  for (const auto& m : r.mazes) {
    out << m.maze_id << ',' << eval::to_string(algo) << ',' << (m.solved ? 1 : 0) << ',' << num(m.trajectory_m) << ','
        << num(m.astar_m) << ',' << num(m.ratio) << ',' << (m.crashed ? 1 : 0) << ',' << num(m.elapsed_s) << '\n';
  }
  return out.str();
}

std::string plot_svg(const std::vector<std::pair<std::string, std::vector<LogRow>>>& series,
                     const std::vector<std::string>& columns, const std::string& title) {
  constexpr double W = 720, H = 420, left = 70, right = 160, top = 40, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  auto pick = [](const LogRow& r, const std::string& col) {
    if (col == "avg") return r.avg_fitness;
    if (col == "max") return r.max_fitness;
    if (col == "best") return r.best_so_far;
    throw Error("unknown plot column '" + col + "' (use avg, max or best)");
  };

  int max_gen = 1;
  double max_y = 0.0;
  for (const auto& [name, rows] : series) {
    for (const auto& r : rows) {
      max_gen = std::max(max_gen, r.generation);
      for (const auto& c : columns) max_y = std::max(max_y, pick(r, c));
    }
  }
  if (!(max_y > 0.0)) max_y = 1.0;
  const double px = (W - left - right) / max_gen;
  const double py = (H - top - bottom) / max_y;
  auto X = [&](double g) { return left + g * px; };
  auto Y = [&](double v) { return H - bottom - v * py; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = max_y * k / 4.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << text::fixed(v, max_y < 10 ? 2 : 0) << "</text>\n";
    const int g = max_gen * k / 4;
    out << "<text x=\"" << X(g) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\" font-size=\"11\">" << g
        << "</text>\n";
  }
  out << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">generation</text>\n";

  int idx = 0;
  double legend_y = top + 10;
  for (const auto& [name, rows] : series) {
    for (const auto& col : columns) {
      const char* colour = palette[idx++ % 6];
      const char* dash = col == "avg" ? " stroke-dasharray=\"5,3\"" : "";
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\"" << dash << " points=\"";
      for (const auto& r : rows) out << text::fixed(X(r.generation), 2) << ',' << text::fixed(Y(pick(r, col)), 2) << ' ';
      out << "\"/>\n";
      out << "<text x=\"" << W - right + 10 << "\" y=\"" << legend_y << "\" font-size=\"11\" fill=\"" << colour << "\">"
          << name << ' ' << col << "</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
  return out.str();
}

// --- maze sets ---------------------------------------------------------------------

void write_maze_set(const std::vector<eval::Scenario>& mazes, const std::string& dir) {
  fs::create_directories(dir);
  std::ostringstream index;
  index << "maze_id,file,astar_m\n";
  for (std::size_t k = 0; k < mazes.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "maze_%03zu.maze", k);
    save_maze(mazes[k].world->maze(), (fs::path(dir) / name).string());
    index << mazes[k].id << ',' << name << ',' << text::fixed(mazes[k].astar_m, 9) << '\n';
  }
  text::write_file((fs::path(dir) / "index.csv").string(), index.str());
}

std::vector<eval::Scenario> read_maze_set(const std::string& dir) {
  const std::string index_path = (fs::path(dir) / "index.csv").string();
  const std::string index = text::read_file(index_path);
  std::vector<eval::Scenario> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < index.size()) {
    const std::size_t end = std::min(index.find('\n', pos), index.size());
    const std::string_view line = text::trim(std::string_view(index).substr(pos, end - pos));
    pos = end + 1;
    if (++line_no == 1 || line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw ParseError(index_path, line_no, "expected maze_id,file,astar_m");
    }
    eval::Scenario s;
    s.id = std::string(line.substr(0, c1));
    const std::string file(line.substr(c1 + 1, c2 - c1 - 1));
    const auto astar = text::parse_double(line.substr(c2 + 1));
    if (!astar) throw ParseError(index_path, line_no, "bad astar_m");
    Maze maze = load_maze((fs::path(dir) / file).string());
    s.start = maze.start;
    s.astar_m = *astar;
    s.world = std::make_shared<const World>(std::move(maze));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace navevo::harness
