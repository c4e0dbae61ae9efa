#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "navevo/error.hpp"
#include "navevo/harness.hpp"
#include "navevo/text.hpp"

namespace navevo::harness {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct Field {
  const char* key;
  // Returns an error message, empty on success.
  std::function<std::string(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field number_field(const char* key, T ExperimentConfig::*member) {
  return {key,
          [member](ExperimentConfig& c, std::string_view v) -> std::string {
            if constexpr (std::is_same_v<T, double>) {
              auto d = text::parse_double(v);
              if (!d) return "expected a number";
              c.*member = *d;
            } else {
              auto i = text::parse_int(v);
              if (!i) return "expected an integer";
              c.*member = static_cast<T>(*i);
            }
            return {};
          },
          [member](const ExperimentConfig& c) -> std::string {
            if constexpr (std::is_same_v<T, double>) {
              return shortest(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

// Accessors into nested structs.
template <typename T>
Field nested(const char* key, std::function<T&(ExperimentConfig&)> ref) {
  return {key,
          [ref](ExperimentConfig& c, std::string_view v) -> std::string {
            if constexpr (std::is_same_v<T, double>) {
              auto d = text::parse_double(v);
              if (!d) return "expected a number";
              ref(c) = *d;
            } else if constexpr (std::is_same_v<T, bool>) {
              auto b = text::parse_bool(v);
              if (!b) return "expected true or false";
              ref(c) = *b;
            } else {
              auto i = text::parse_int(v);
              if (!i) return "expected an integer";
              ref(c) = static_cast<T>(*i);
            }
            return {};
          },
          [ref](const ExperimentConfig& c) -> std::string {
            const T& v = ref(const_cast<ExperimentConfig&>(c));
            if constexpr (std::is_same_v<T, double>) {
              return shortest(v);
            } else if constexpr (std::is_same_v<T, bool>) {
              return v ? "true" : "false";
            } else {
              return std::to_string(v);
            }
          }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> all = {
      {"task",
       [](C& c, std::string_view v) -> std::string {
         auto t = eval::task_from_string(v);
         if (!t) return "expected bearing or nobearing";
         c.task = *t;
         return {};
       },
       [](const C& c) -> std::string { return eval::to_string(c.task); }},
      nested<bool>("gru_enabled", [](C& c) -> bool& { return c.gru_enabled; }),
      number_field("population_size", &C::population_size),
      number_field("generations", &C::generations),
      number_field("time_limit_s", &C::time_limit_s),
      number_field("training_mazes", &C::training_mazes),
      nested<double>("maze_side", [](C& c) -> double& { return c.maze.side_m; }),
      nested<double>("room_density", [](C& c) -> double& { return c.maze.room_density; }),
      nested<double>("loop_probability", [](C& c) -> double& { return c.maze.loop_probability; }),
      nested<double>("add_node_prob", [](C& c) -> double& { return c.reproduction.mutation.add_node_prob; }),
      nested<double>("add_gru_prob", [](C& c) -> double& { return c.reproduction.mutation.add_gru_prob; }),
      nested<double>("add_link_prob", [](C& c) -> double& { return c.reproduction.mutation.add_link_prob; }),
      nested<double>("weight_prob", [](C& c) -> double& { return c.reproduction.mutation.weight_prob; }),
      nested<double>("severe_prob", [](C& c) -> double& { return c.reproduction.mutation.severe_prob; }),
      nested<double>("weight_power", [](C& c) -> double& { return c.reproduction.mutation.weight_power; }),
      nested<double>("gru_power", [](C& c) -> double& { return c.reproduction.mutation.gru_power; }),
      nested<double>("survival_threshold", [](C& c) -> double& { return c.reproduction.survival_threshold; }),
      nested<bool>("crossover", [](C& c) -> bool& { return c.reproduction.crossover; }),
      nested<double>("crossover_prob", [](C& c) -> double& { return c.reproduction.crossover_prob; }),
      nested<int>("elite_min_species_size", [](C& c) -> int& { return c.reproduction.elite_min_species_size; }),
      nested<int>("stagnation_limit", [](C& c) -> int& { return c.reproduction.stagnation_limit; }),
      nested<double>("compat_excess", [](C& c) -> double& { return c.reproduction.compatibility.excess; }),
      nested<double>("compat_disjoint", [](C& c) -> double& { return c.reproduction.compatibility.disjoint; }),
      nested<double>("compat_weight", [](C& c) -> double& { return c.reproduction.compatibility.weight; }),
      nested<double>("compat_threshold", [](C& c) -> double& { return c.reproduction.compatibility.threshold; }),
      number_field("test_every", &C::test_every),
      number_field("test_count", &C::test_count),
      number_field("test_seed", &C::test_seed),
      number_field("master_seed", &C::master_seed),
      {"output_dir",
       [](C& c, std::string_view v) -> std::string {
         if (v.empty()) return "expected a path";
         c.output_dir = std::string(v);
         return {};
       },
       [](const C& c) -> std::string { return c.output_dir; }},
  };
  return all;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

ExperimentConfig default_config(eval::Task task, bool gru_enabled) {
  ExperimentConfig c;
  c.task = task;
  c.gru_enabled = gru_enabled;
  auto& m = c.reproduction.mutation;
  if (task == eval::Task::bearing) {
    c.generations = 1000;
    c.time_limit_s = 300.0;
    m.add_node_prob = 0.005;
    m.add_gru_prob = 0.003;
    m.weight_power = m.gru_power = 1.5;
    c.reproduction.survival_threshold = 0.55;
  } else {
    c.generations = 5000;
    c.time_limit_s = 80.0;
    m.add_node_prob = 0.006;
    m.add_gru_prob = 0.006;
    m.weight_power = m.gru_power = 0.5;
    c.reproduction.survival_threshold = 0.4;
    c.test_every = 0;
  }
  m.gru_enabled = gru_enabled;
  c.reproduction.crossover = !gru_enabled;
  return c;
}

void check(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw Error("invalid config: " + what); };
  const auto& m = c.reproduction.mutation;
  for (auto [name, p] : {std::pair{"add_node_prob", m.add_node_prob}, {"add_gru_prob", m.add_gru_prob},
                         {"add_link_prob", m.add_link_prob}, {"weight_prob", m.weight_prob},
                         {"severe_prob", m.severe_prob}, {"survival_threshold", c.reproduction.survival_threshold},
                         {"crossover_prob", c.reproduction.crossover_prob},
                         {"loop_probability", c.maze.loop_probability}}) {
    if (!(p >= 0.0 && p <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
  }
  if (c.population_size <= 0) fail("population_size must be positive");
  if (c.generations <= 0) fail("generations must be positive");
  if (!(c.time_limit_s > 0.0)) fail("time_limit_s must be positive");
  if (c.training_mazes <= 0) fail("training_mazes must be positive");
  if (!(m.weight_power > 0.0) || !(m.gru_power > 0.0)) fail("mutation powers must be positive");
  if (c.test_every < 0 || c.test_count < 0) fail("test_every and test_count must not be negative");
  if (c.test_every > 0 && c.test_count == 0) fail("test_every needs test_count > 0");
  if (!c.gru_enabled && m.add_gru_prob > 0.0 && m.gru_enabled) fail("internal: GRU mutation enabled without GRU mode");
  if (c.reproduction.compatibility.threshold <= 0.0) fail("compat_threshold must be positive");
  if (c.reproduction.stagnation_limit <= 0) fail("stagnation_limit must be positive");
}

ExperimentConfig config_from_text(std::string_view src, const std::string& source) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= src.size()) {
    const std::size_t end = std::min(src.find('\n', pos), src.size());
    std::string_view line = src.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (!find_field(key)) throw ParseError(source, line_no, "unknown key '" + key + "'");
    if (entries.count(key)) throw ParseError(source, line_no, "duplicate key '" + key + "'");
    entries[key] = {value, line_no};
    order.push_back(key);
  }

  ExperimentConfig probe;
  for (const char* selector : {"task", "gru_enabled"}) {
    auto it = entries.find(selector);
    if (it == entries.end()) continue;
    if (auto err = find_field(selector)->set(probe, it->second.value); !err.empty()) {
      throw ParseError(source, it->second.line, std::string(selector) + ": " + err);
    }
  }
  ExperimentConfig c = default_config(probe.task, probe.gru_enabled);
  for (const auto& key : order) {
    const Entry& e = entries[key];
    if (auto err = find_field(key)->set(c, e.value); !err.empty()) throw ParseError(source, e.line, key + ": " + err);
  }
  c.reproduction.mutation.gru_enabled = c.gru_enabled;
  try {
    check(c);
  } catch (const Error& err) {
    throw ParseError(source, line_no, err.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) { return config_from_text(text::read_file(path), path); }

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  for (const auto& f : fields()) out << f.key << " = " << f.get(c) << '\n';
  return out.str();
}

}  // namespace navevo::harness
