#include <json.hpp>

#include "navevo/error.hpp"
#include "navevo/harness.hpp"

namespace navevo::harness {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json genome_json(const neat::Genome& g) {
  return {{"id", g.id}, {"fitness", g.fitness}, {"species", g.species_id}, {"genes", neat::to_text(g)}};
}

neat::Genome genome_of(const json& j, const std::string& source) {
  neat::Genome g = neat::genome_from_text(j.at("genes").get<std::string>(), source);
  g.id = j.at("id").get<std::uint64_t>();
  g.fitness = j.at("fitness").get<double>();
  g.species_id = j.at("species").get<int>();
  return g;
}

json report_json(const eval::TestSetReport& r) {
  return {{"total", r.total},
          {"solved", r.solved},
          {"success_pct", r.success_pct},
          {"ratio_mean", r.ratio_mean},
          {"ratio_median", r.ratio_median}};
}

eval::TestSetReport report_of(const json& j) {
  eval::TestSetReport r;
  r.total = j.at("total").get<int>();
  r.solved = j.at("solved").get<int>();
  r.success_pct = j.at("success_pct").get<double>();
  r.ratio_mean = j.at("ratio_mean").get<double>();
  r.ratio_median = j.at("ratio_median").get<double>();
  return r;
}

}  // namespace

std::string checkpoint_to_text(const RunState& state) {
  const neat::Population& pop = state.population;
  json j;
  j["version"] = kFormatVersion;
  j["generation"] = pop.generation;
  j["next_genome_id"] = pop.next_genome_id;
  j["next_species_id"] = pop.next_species_id;

  const auto snap = pop.innovations.snapshot();
  j["innovations"] = {{"next_node", snap.next_node},
                      {"next_innovation", snap.next_innovation},
                      {"links", snap.links},
                      {"splits", snap.splits}};

  j["genomes"] = json::array();
  for (const auto& g : pop.genomes) j["genomes"].push_back(genome_json(g));
  j["species"] = json::array();
  for (const auto& s : pop.species) {
    j["species"].push_back({{"id", s.id},
                            {"representative", genome_json(s.representative)},
                            {"members", s.members},
                            {"best_fitness", s.best_fitness},
                            {"staleness", s.staleness},
                            {"created", s.created}});
  }

  j["log"] = json::array();
  for (const auto& r : state.log) {
    j["log"].push_back({r.generation, r.avg_fitness, r.max_fitness, r.best_so_far, r.species_count, r.gru_node_mean, r.max_solved});
  }
  j["history"] = json::array();
  for (const auto& top : state.history) {
    json best = json::array();
    for (const auto& g : top.best) best.push_back(genome_json(g));
    j["history"].push_back({{"generation", top.generation}, {"best", best}});
  }
  j["tests"] = json::array();
  for (const auto& t : state.tests) {
    j["tests"].push_back({{"generation", t.generation},
                          {"source_generation", t.source_generation},
                          {"rank", t.rank},
                          {"genome_id", t.genome_id},
                          {"report", report_json(t.report)}});
  }
  j["best"] = state.best ? genome_json(*state.best) : json(nullptr);
  return j.dump(1) + "\n";
}

RunState checkpoint_from_text(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, std::string("malformed checkpoint: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != kFormatVersion) throw ParseError(source, 0, "unsupported checkpoint version");
    RunState state;
    neat::Population& pop = state.population;
    pop.generation = j.at("generation").get<int>();
    pop.next_genome_id = j.at("next_genome_id").get<std::uint64_t>();
    pop.next_species_id = j.at("next_species_id").get<int>();

    const json& inn = j.at("innovations");
    neat::InnovationTable::Snapshot snap;
    snap.next_node = inn.at("next_node").get<int>();
    snap.next_innovation = inn.at("next_innovation").get<int>();
    snap.links = inn.at("links").get<std::vector<std::array<int, 3>>>();
    snap.splits = inn.at("splits").get<std::vector<std::array<int, 3>>>();
    pop.innovations = neat::InnovationTable::restore(snap);

    for (const auto& g : j.at("genomes")) pop.genomes.push_back(genome_of(g, source));
    for (const auto& s : j.at("species")) {
      neat::Species sp;
      sp.id = s.at("id").get<int>();
      sp.representative = genome_of(s.at("representative"), source);
      sp.members = s.at("members").get<std::vector<std::size_t>>();
      sp.best_fitness = s.at("best_fitness").get<double>();
      sp.staleness = s.at("staleness").get<int>();
      sp.created = s.at("created").get<int>();
      for (std::size_t m : sp.members) {
        if (m >= pop.genomes.size()) throw ParseError(source, 0, "species member out of range");
      }
      pop.species.push_back(std::move(sp));
    }

    for (const auto& r : j.at("log")) {
      state.log.push_back({r.at(0).get<int>(), r.at(1).get<double>(), r.at(2).get<double>(), r.at(3).get<double>(),
                           r.at(4).get<int>(), r.at(5).get<double>(), r.at(6).get<int>()});
    }
    for (const auto& h : j.at("history")) {
      eval::GenerationTop top;
      top.generation = h.at("generation").get<int>();
      for (const auto& g : h.at("best")) top.best.push_back(genome_of(g, source));
      state.history.push_back(std::move(top));
    }
    for (const auto& t : j.at("tests")) {
      TestRow row;
      row.generation = t.at("generation").get<int>();
      row.source_generation = t.at("source_generation").get<int>();
      row.rank = t.at("rank").get<int>();
      row.genome_id = t.at("genome_id").get<std::uint64_t>();
      row.report = report_of(t.at("report"));
      state.tests.push_back(row);
    }
    if (!j.at("best").is_null()) state.best = genome_of(j.at("best"), source);
    return state;
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("bad checkpoint field: ") + e.what());
  }
}

}  // namespace navevo::harness
