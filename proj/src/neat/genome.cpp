#include <algorithm>
#include <functional>
#include <set>

#include "navevo/error.hpp"
#include "navevo/neat.hpp"
#include "navevo/text.hpp"

namespace navevo::neat {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::input: return "input";
    case NodeKind::bias: return "bias";
    case NodeKind::output: return "output";
    case NodeKind::hidden: return "hidden";
    case NodeKind::gru: return "gru";
  }
  return "?";
}

std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  for (NodeKind k : {NodeKind::input, NodeKind::bias, NodeKind::output, NodeKind::hidden, NodeKind::gru}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

const NodeGene* Genome::node(int id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id, [](const NodeGene& n, int v) { return n.id < v; });
  return it != nodes.end() && it->id == id ? &*it : nullptr;
}

const LinkGene* Genome::link(int from, int to) const {
  for (const auto& l : links) {
    if (l.from == from && l.to == to) return &l;
  }
  return nullptr;
}

int Genome::count(NodeKind kind) const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [kind](const NodeGene& n) { return n.kind == kind; }));
}

void validate(const Genome& g) {
  auto fail = [](const std::string& what) { throw Error("invalid genome: " + what); };
  if (g.inputs <= 0 || g.outputs <= 0) fail("needs inputs and outputs");
  if (static_cast<int>(g.nodes.size()) < g.inputs + 1 + g.outputs) fail("missing fixed nodes");
  for (int i = 0; i < g.inputs + 1 + g.outputs; ++i) {
    const NodeKind want = i < g.inputs ? NodeKind::input : i == g.inputs ? NodeKind::bias : NodeKind::output;
    if (g.nodes[i].id != i || g.nodes[i].kind != want) fail("fixed node " + std::to_string(i) + " misplaced");
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const NodeGene& n = g.nodes[i];
    if (i > 0 && g.nodes[i - 1].id >= n.id) fail("node ids not strictly increasing");
    if (i >= static_cast<std::size_t>(g.inputs + 1 + g.outputs) && n.kind != NodeKind::hidden && n.kind != NodeKind::gru) {
      fail("node " + std::to_string(n.id) + " has a fixed kind past the fixed block");
    }
    if (n.gru.has_value() != (n.kind == NodeKind::gru)) fail("node " + std::to_string(n.id) + " GRU parameters mismatch");
  }
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < g.links.size(); ++i) {
    const LinkGene& l = g.links[i];
    if (i > 0 && g.links[i - 1].innovation >= l.innovation) fail("link innovations not strictly increasing");
    const NodeGene* from = g.node(l.from);
    const NodeGene* to = g.node(l.to);
    if (!from || !to) fail("link " + std::to_string(l.innovation) + " has a dangling endpoint");
    if (to->kind == NodeKind::input || to->kind == NodeKind::bias) {
      fail("link " + std::to_string(l.innovation) + " feeds an input");
    }
    if (from->kind == NodeKind::output && !l.recurrent) {
      fail("link " + std::to_string(l.innovation) + " leaves an output but is not recurrent");
    }
    if (!pairs.insert({l.from, l.to}).second) fail("duplicate link " + std::to_string(l.from) + "->" + std::to_string(l.to));
  }
  // Feed-forward links must form a DAG.
  std::map<int, std::vector<int>> adj;
  for (const auto& l : g.links) {
    if (!l.recurrent) adj[l.from].push_back(l.to);
  }
  std::map<int, int> state;  // 1 visiting, 2 done
  std::function<void(int)> visit = [&](int v) {
    state[v] = 1;
    for (int w : adj[v]) {
      if (state[w] == 1) fail("feed-forward cycle through node " + std::to_string(w));
      if (state[w] == 0) visit(w);
    }
    state[v] = 2;
  };
  for (const auto& n : g.nodes) {
    if (state[n.id] == 0) visit(n.id);
  }
}

void quantize_weights(Genome& g) {
  for (auto& l : g.links) l.weight = text::quantize(l.weight, kWeightDecimals);
  for (auto& n : g.nodes) {
    if (n.gru) {
      for (double& v : n.gru->p) v = text::quantize(v, kWeightDecimals);
    }
  }
}

int InnovationTable::link_innovation(int from, int to) {
  auto [it, fresh] = links_.try_emplace({from, to}, next_innovation_);
  if (fresh) ++next_innovation_;
  return it->second;
}

int InnovationTable::split_node(int innovation, NodeKind kind, const Genome& genome) {
  const std::pair<int, int> key{innovation, static_cast<int>(kind)};
  auto it = splits_.find(key);
  if (it != splits_.end() && !genome.node(it->second)) return it->second;
  const int id = next_node_++;
  if (it == splits_.end()) splits_.emplace(key, id);
  return id;
}

InnovationTable::Snapshot InnovationTable::snapshot() const {
  Snapshot s;
  s.next_node = next_node_;
  s.next_innovation = next_innovation_;
  for (const auto& [k, v] : links_) s.links.push_back({k.first, k.second, v});
  for (const auto& [k, v] : splits_) s.splits.push_back({k.first, k.second, v});
  return s;
}

InnovationTable InnovationTable::restore(const Snapshot& s) {
  InnovationTable t(s.next_node, s.next_innovation);
  for (const auto& e : s.links) t.links_[{e[0], e[1]}] = e[2];
  for (const auto& e : s.splits) t.splits_[{e[0], e[1]}] = e[2];
  return t;
}

Genome minimal_genome(int inputs, int outputs, InnovationTable& table, Rng& rng) {
  if (inputs <= 0 || outputs <= 0) throw Error("a genome needs at least one input and one output");
  Genome g;
  g.inputs = inputs;
  g.outputs = outputs;
  for (int i = 0; i < inputs; ++i) g.nodes.push_back({i, NodeKind::input, std::nullopt});
  g.nodes.push_back({inputs, NodeKind::bias, std::nullopt});
  for (int k = 0; k < outputs; ++k) g.nodes.push_back({inputs + 1 + k, NodeKind::output, std::nullopt});
  if (table.next_node() < inputs + 1 + outputs) table = InnovationTable(inputs + 1 + outputs, table.next_innovation());
  for (int i = 0; i <= inputs; ++i) {
    for (int k = 0; k < outputs; ++k) {
      const int to = g.output_id(k);
      g.links.push_back({table.link_innovation(i, to), i, to, rng.uniform(-1.0, 1.0), true, false});
    }
  }
  std::sort(g.links.begin(), g.links.end(), [](const LinkGene& a, const LinkGene& b) { return a.innovation < b.innovation; });
  quantize_weights(g);
  return g;
}

}  // namespace navevo::neat
