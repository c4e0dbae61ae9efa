#include <algorithm>

#include "navevo/error.hpp"
#include "navevo/neat.hpp"

namespace navevo::neat {

namespace {

bool by_innovation(const LinkGene& a, const LinkGene& b) { return a.innovation < b.innovation; }

void insert_link(Genome& g, const LinkGene& link) {
  g.links.insert(std::upper_bound(g.links.begin(), g.links.end(), link, by_innovation), link);
}

void insert_node(Genome& g, NodeGene node) {
  auto pos = std::upper_bound(g.nodes.begin(), g.nodes.end(), node.id,
                              [](int id, const NodeGene& n) { return id < n.id; });
  g.nodes.insert(pos, std::move(node));
}

// True if `target` is reachable from `start` over feed-forward links.
bool reaches(const Genome& g, int start, int target) {
  std::vector<int> stack{start};
  std::vector<int> seen;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v == target) return true;
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
    seen.push_back(v);
    for (const auto& l : g.links) {
      if (!l.recurrent && l.from == v) stack.push_back(l.to);
    }
  }
  return false;
}

GruParams random_gru(Rng& rng) {
  GruParams p;
  for (double& v : p.p) v = rng.uniform(-1.0, 1.0);
  return p;
}

double perturb(double value, double power, double severe_prob, Rng& rng) {
  const bool severe = rng.bernoulli(severe_prob);
  const double u = rng.uniform(-power, power);
  return severe ? u : value + u;
}

}  // namespace

bool mutate_add_node(Genome& g, Rng& rng, InnovationTable& table, NodeKind kind) {
  if (kind != NodeKind::hidden && kind != NodeKind::gru) throw Error("only hidden or gru nodes can be inserted");
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < g.links.size(); ++i) {
    if (g.links[i].enabled) enabled.push_back(i);
  }
  if (enabled.empty()) return false;
  const std::size_t pick = enabled[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(enabled.size()) - 1))];
  LinkGene old = g.links[pick];
  g.links[pick].enabled = false;

  const int id = table.split_node(old.innovation, kind, g);
  NodeGene node{id, kind, std::nullopt};
  if (kind == NodeKind::gru) node.gru = random_gru(rng);
  insert_node(g, std::move(node));
  insert_link(g, {table.link_innovation(old.from, id), old.from, id, 1.0, true, old.recurrent});
  insert_link(g, {table.link_innovation(id, old.to), id, old.to, old.weight, true, false});
  quantize_weights(g);
  return true;
}

bool mutate_add_gru_node(Genome& g, Rng& rng, InnovationTable& table) {
  return mutate_add_node(g, rng, table, NodeKind::gru);
}

bool mutate_add_link(Genome& g, Rng& rng, InnovationTable& table, int attempts) {
  std::vector<int> targets;
  for (const auto& n : g.nodes) {
    if (n.kind != NodeKind::input && n.kind != NodeKind::bias) targets.push_back(n.id);
  }
  const auto last_node = static_cast<std::int64_t>(g.nodes.size()) - 1;
  const auto last_target = static_cast<std::int64_t>(targets.size()) - 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const NodeGene& from = g.nodes[static_cast<std::size_t>(rng.uniform_int(0, last_node))];
    const int to = targets[static_cast<std::size_t>(rng.uniform_int(0, last_target))];
    if (g.link(from.id, to)) continue;
    const bool recurrent = from.kind == NodeKind::output || from.id == to || reaches(g, to, from.id);
    insert_link(g, {table.link_innovation(from.id, to), from.id, to, rng.uniform(-1.0, 1.0), true, recurrent});
    quantize_weights(g);
    return true;
  }
  return false;
}

void mutate_weights(Genome& g, double power, double gru_power, double severe_prob, Rng& rng) {
  if (!(power > 0.0) || !(gru_power > 0.0)) throw Error("mutation power must be positive");
  for (auto& l : g.links) l.weight = perturb(l.weight, power, severe_prob, rng);
  for (auto& n : g.nodes) {
    if (!n.gru) continue;
    for (double& v : n.gru->p) v = perturb(v, gru_power, severe_prob, rng);
  }
  quantize_weights(g);
}

void mutate(Genome& g, const MutationParams& p, Rng& rng, InnovationTable& table) {
  if (rng.bernoulli(p.add_node_prob)) mutate_add_node(g, rng, table, NodeKind::hidden);
  if (p.gru_enabled && rng.bernoulli(p.add_gru_prob)) mutate_add_gru_node(g, rng, table);
  if (rng.bernoulli(p.add_link_prob)) mutate_add_link(g, rng, table, p.add_link_attempts);
  if (rng.bernoulli(p.weight_prob)) mutate_weights(g, p.weight_power, p.gru_power, p.severe_prob, rng);
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng) {
  constexpr double kStayDisabled = 0.75;
  Genome child = a;
  child.fitness = 0.0;
  child.species_id = -1;
  auto bl = b.links.begin();
  for (auto& l : child.links) {
    while (bl != b.links.end() && bl->innovation < l.innovation) ++bl;
    if (bl == b.links.end() || bl->innovation != l.innovation) continue;
    const bool any_disabled = !l.enabled || !bl->enabled;
    if (rng.bernoulli(0.5)) l.weight = bl->weight;
    l.enabled = !(any_disabled && rng.bernoulli(kStayDisabled));
  }
  for (auto& n : child.nodes) {
    if (!n.gru) continue;
    const NodeGene* other = b.node(n.id);
    if (other && other->gru && rng.bernoulli(0.5)) n.gru = other->gru;
  }
  return child;
}

}  // namespace navevo::neat
