#include "navevo/eval.hpp"

namespace navevo::eval {

GenerationTop top_of_generation(int generation, const std::vector<neat::Genome>& genomes, int keep) {
  GenerationTop top;
  top.generation = generation;
  for (const neat::Genome* g : neat::ranked(genomes)) {
    if (static_cast<int>(top.best.size()) == keep) break;
    top.best.push_back(*g);
  }
  return top;
}

std::vector<Champion> select_champions(const std::vector<GenerationTop>& history) {
  static constexpr int kSlots[] = {3, 2, 1};  // newest generation first
  std::vector<Champion> out;
  for (int back = 0; back < 3 && back < static_cast<int>(history.size()); ++back) {
    const GenerationTop& gen = history[history.size() - 1 - back];
    for (int rank = 0; rank < kSlots[back] && rank < static_cast<int>(gen.best.size()); ++rank) {
      out.push_back({gen.generation, rank, gen.best[rank]});
    }
  }
  return out;
}

}  // namespace navevo::eval
