#include <cmath>
#include <queue>

#include "navevo/error.hpp"
#include "navevo/neat.hpp"

namespace navevo::neat {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double wheel_speed(double output, double max_speed) { return (output - 0.5) * 2.0 * max_speed; }

Network::Network(const Genome& g) : inputs_(g.inputs), bias_slot_(g.bias_id()) {
  const std::size_t n = g.nodes.size();
  std::map<int, int> slot;
  for (std::size_t i = 0; i < n; ++i) slot[g.nodes[i].id] = static_cast<int>(i);

  // Kahn's algorithm over enabled feed-forward links; ready nodes are taken
  // in id order so the schedule is deterministic.
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const auto& l : g.links) {
    if (!l.enabled || l.recurrent) continue;
    out[slot.at(l.from)].push_back(slot.at(l.to));
    ++indegree[slot.at(l.to)];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(static_cast<int>(i));
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : out[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) throw Error("genome has a feed-forward cycle");

  std::vector<int> unit_of(n, -1);
  for (int s : order) {
    const NodeGene& node = g.nodes[s];
    if (node.kind == NodeKind::input || node.kind == NodeKind::bias) continue;
    unit_of[s] = static_cast<int>(units_.size());
    units_.push_back({s, node.kind == NodeKind::gru, node.gru.value_or(GruParams{}), {}});
  }
  for (const auto& l : g.links) {
    if (!l.enabled) continue;
    units_[unit_of[slot.at(l.to)]].incoming.push_back({slot.at(l.from), l.weight, l.recurrent});
  }
  for (int k = 0; k < g.outputs; ++k) output_slots_.push_back(slot.at(g.output_id(k)));
  current_.assign(n, 0.0);
  previous_.assign(n, 0.0);
  outputs_.assign(output_slots_.size(), 0.0);
}

void Network::reset() {
  std::fill(current_.begin(), current_.end(), 0.0);
  std::fill(previous_.begin(), previous_.end(), 0.0);
  std::fill(outputs_.begin(), outputs_.end(), 0.0);
}

const std::vector<double>& Network::activate(const std::vector<double>& inputs) {
  if (static_cast<int>(inputs.size()) != inputs_) {
    throw Error("network expects " + std::to_string(inputs_) + " inputs, got " + std::to_string(inputs.size()));
  }
  for (int i = 0; i < inputs_; ++i) current_[i] = inputs[i];
  current_[bias_slot_] = 1.0;
  for (const Unit& u : units_) {
    double a = 0.0;
    for (const Incoming& in : u.incoming) a += in.weight * (in.recurrent ? previous_[in.source] : current_[in.source]);
    if (!u.gru) {
      current_[u.slot] = sigmoid(a);
      continue;
    }
    const GruParams& p = u.params;
    const double h = previous_[u.slot];
    const double z = sigmoid(p.wz() * a + p.uz() * h + p.bz());
    const double r = sigmoid(p.wr() * a + p.ur() * h + p.br());
    const double c = std::tanh(p.wc() * a + p.uc() * (r * h) + p.bc());
    current_[u.slot] = (1.0 - z) * h + z * c;
  }
  for (std::size_t k = 0; k < output_slots_.size(); ++k) outputs_[k] = current_[output_slots_[k]];
  previous_.swap(current_);
  return outputs_;
}

}  // namespace navevo::neat
