#include <algorithm>
#include <cmath>
#include <numeric>

#include "navevo/error.hpp"
#include "navevo/neat.hpp"

namespace navevo::neat {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974;

bool fitter(const Genome& a, const Genome& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.id < b.id;
}

}  // namespace

double compatibility_distance(const Genome& a, const Genome& b, const CompatibilityParams& params) {
  const auto& la = a.links;
  const auto& lb = b.links;
  const int max_a = la.empty() ? -1 : la.back().innovation;
  const int max_b = lb.empty() ? -1 : lb.back().innovation;
  const int horizon = std::min(max_a, max_b);

  int excess = 0, disjoint = 0, matching = 0;
  double weight_diff = 0.0;
  auto unmatched = [&](int innovation) { (innovation > horizon ? excess : disjoint)++; };
  std::size_t i = 0, j = 0;
  while (i < la.size() || j < lb.size()) {
    if (j == lb.size() || (i < la.size() && la[i].innovation < lb[j].innovation)) {
      unmatched(la[i++].innovation);
    } else if (i == la.size() || lb[j].innovation < la[i].innovation) {
      unmatched(lb[j++].innovation);
    } else {
      weight_diff += std::abs(la[i].weight - lb[j].weight);
      ++matching;
      ++i;
      ++j;
    }
  }
  for (const auto& n : a.nodes) {
    if (!n.gru) continue;
    const NodeGene* m = b.node(n.id);
    if (!m || !m->gru) continue;
    double d = 0.0;
    for (std::size_t k = 0; k < GruParams::kCount; ++k) d += std::abs(n.gru->p[k] - m->gru->p[k]);
    weight_diff += d / GruParams::kCount;
    ++matching;
  }

  const std::size_t longest = std::max(la.size(), lb.size());
  const double n = longest < static_cast<std::size_t>(params.small_genome) ? 1.0 : static_cast<double>(longest);
  const double mean_weight = matching > 0 ? weight_diff / matching : 0.0;
  return params.excess * excess / n + params.disjoint * disjoint / n + params.weight * mean_weight;
}

Population init_population(int size, int inputs, int outputs, const CompatibilityParams& compat, std::uint64_t seed) {
  if (size <= 0) throw Error("population size must be positive");
  Population pop;
  Rng rng(derive_seed(seed, {kInitStream}));
  for (int i = 0; i < size; ++i) {
    Genome g = minimal_genome(inputs, outputs, pop.innovations, rng);
    g.id = pop.next_genome_id++;
    pop.genomes.push_back(std::move(g));
  }
  speciate(pop, compat);
  return pop;
}

void speciate(Population& pop, const CompatibilityParams& params) {
  for (auto& s : pop.species) s.members.clear();
  for (std::size_t i = 0; i < pop.genomes.size(); ++i) {
    Genome& g = pop.genomes[i];
    Species* home = nullptr;
    for (auto& s : pop.species) {
      if (compatibility_distance(s.representative, g, params) < params.threshold) {
        home = &s;
        break;
      }
    }
    if (!home) {
      Species fresh;
      fresh.id = pop.next_species_id++;
      fresh.representative = g;
      fresh.created = pop.generation;
      pop.species.push_back(std::move(fresh));
      home = &pop.species.back();
    }
    home->members.push_back(i);
    g.species_id = home->id;
  }
  std::erase_if(pop.species, [](const Species& s) { return s.members.empty(); });
}

int survivor_count(int n, double threshold) {
  return std::clamp(static_cast<int>(std::floor(threshold * n)) + 1, 1, n);
}

std::vector<int> allocate_offspring(const std::vector<double>& shares, const std::vector<double>& fallback, int total) {
  const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
  const std::vector<double>& w = sum > 0.0 ? shares : fallback;
  const double wsum = sum > 0.0 ? sum : std::accumulate(fallback.begin(), fallback.end(), 0.0);
  std::vector<int> counts(w.size(), 0);
  if (w.empty() || !(wsum > 0.0)) return counts;
  std::vector<double> frac(w.size());
  int given = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double quota = total * w[i] / wsum;
    counts[i] = static_cast<int>(std::floor(quota));
    frac[i] = quota - counts[i];
    given += counts[i];
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; given < total; k = (k + 1) % order.size(), ++given) ++counts[order[k]];
  return counts;
}

std::vector<const Genome*> ranked(const std::vector<Genome>& genomes) {
  std::vector<const Genome*> out;
  for (const auto& g : genomes) out.push_back(&g);
  std::sort(out.begin(), out.end(), [](const Genome* a, const Genome* b) { return fitter(*a, *b); });
  return out;
}

void reproduce(Population& pop, const ReproductionParams& params, Rng& rng) {
  if (pop.genomes.empty()) throw Error("cannot reproduce an empty population");
  const int total = static_cast<int>(pop.genomes.size());
  const std::uint64_t champion_id = ranked(pop.genomes).front()->id;

  struct Pool {
    Species* species;
    std::vector<const Genome*> members;  // best first
    bool has_champion;
  };
  std::vector<Pool> pools;
  for (auto& s : pop.species) {
    Pool p{&s, {}, false};
    for (std::size_t idx : s.members) p.members.push_back(&pop.genomes[idx]);
    std::sort(p.members.begin(), p.members.end(), [](const Genome* a, const Genome* b) { return fitter(*a, *b); });
    const double best = p.members.front()->fitness;
    if (best > s.best_fitness) {
      s.best_fitness = best;
      s.staleness = 0;
    } else {
      ++s.staleness;
    }
    p.has_champion = std::any_of(p.members.begin(), p.members.end(), [&](const Genome* g) { return g->id == champion_id; });
    if (s.staleness < params.stagnation_limit || p.has_champion) pools.push_back(std::move(p));
  }

  std::vector<double> shares, sizes;
  for (const auto& p : pools) {
    double sum = 0.0;
    for (const Genome* g : p.members) sum += g->fitness;
    shares.push_back(sum / static_cast<double>(p.members.size()));  // shared fitness total
    sizes.push_back(static_cast<double>(p.members.size()));
  }
  const std::vector<int> quota = allocate_offspring(shares, sizes, total);

  std::vector<Genome> next;
  next.reserve(pop.genomes.size());
  std::vector<Species> kept;
  for (std::size_t k = 0; k < pools.size(); ++k) {
    const Pool& p = pools[k];
    Species s = *p.species;
    s.representative = *p.members.front();
    kept.push_back(std::move(s));

    int remaining = quota[k];
    const int n = static_cast<int>(p.members.size());
    if (remaining > 0 && n >= params.elite_min_species_size) {
      Genome elite = *p.members.front();
      elite.fitness = 0.0;
      next.push_back(std::move(elite));
      --remaining;
    }
    const int survivors = survivor_count(n, params.survival_threshold);
    auto pick = [&]() { return p.members[static_cast<std::size_t>(rng.uniform_int(0, survivors - 1))]; };
    for (; remaining > 0; --remaining) {
      Genome child;
      if (params.crossover && survivors >= 2 && rng.bernoulli(params.crossover_prob)) {
        const Genome* a = pick();
        const Genome* b = pick();
        child = fitter(*a, *b) ? crossover(*a, *b, rng) : crossover(*b, *a, rng);
      } else {
        child = *pick();
      }
      mutate(child, params.mutation, rng, pop.innovations);
      child.id = pop.next_genome_id++;
      child.fitness = 0.0;
      next.push_back(std::move(child));
    }
  }

  pop.genomes = std::move(next);
  pop.species = std::move(kept);
  ++pop.generation;
  speciate(pop, params.compatibility);
}

}  // namespace navevo::neat
