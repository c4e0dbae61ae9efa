#include <sstream>

#include "navevo/error.hpp"
#include "navevo/neat.hpp"
#include "navevo/text.hpp"

namespace navevo::neat {

std::string to_text(const Genome& g) {
  std::ostringstream out;
  out << "genome v1\n";
  for (const auto& n : g.nodes) out << "node " << n.id << ' ' << to_string(n.kind) << '\n';
  for (const auto& n : g.nodes) {
    if (!n.gru) continue;
    out << "gru " << n.id;
    for (double v : n.gru->p) out << ' ' << text::fixed(v, kWeightDecimals);
    out << '\n';
  }
  for (const auto& l : g.links) {
    out << "link " << l.innovation << ' ' << l.from << ' ' << l.to << ' ' << text::fixed(l.weight, kWeightDecimals) << ' '
        << (l.enabled ? 1 : 0) << ' ' << (l.recurrent ? 1 : 0) << '\n';
  }
  return out.str();
}

Genome genome_from_text(std::string_view src, const std::string& source) {
  Genome g;
  int line_no = 0;
  bool header = false;
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> void { throw ParseError(source, line_no, what); };
  auto number = [&](std::string_view tok) {
    auto v = text::parse_double(tok);
    if (!v) fail("bad number '" + std::string(tok) + "'");
    return *v;
  };
  auto integer = [&](std::string_view tok) {
    auto v = text::parse_int(tok);
    if (!v || *v < 0 || *v > 1'000'000'000) fail("bad integer '" + std::string(tok) + "'");
    return static_cast<int>(*v);
  };
  auto flag = [&](std::string_view tok) {
    if (tok != "0" && tok != "1") fail("bad flag '" + std::string(tok) + "'");
    return tok == "1";
  };

  while (pos <= src.size()) {
    const std::size_t end = std::min(src.find('\n', pos), src.size());
    const std::string_view line = text::trim(src.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto tok = text::split_ws(line);
    if (!header) {
      if (tok.size() != 2 || tok[0] != "genome" || tok[1] != "v1") fail("expected 'genome v1'");
      header = true;
      continue;
    }
    if (tok[0] == "node") {
      if (tok.size() != 3) fail("node needs an id and a kind");
      auto kind = node_kind_from_string(tok[2]);
      if (!kind) fail("unknown node kind '" + std::string(tok[2]) + "'");
      g.nodes.push_back({integer(tok[1]), *kind, std::nullopt});
      if (*kind == NodeKind::gru) g.nodes.back().gru = GruParams{};
      if (*kind == NodeKind::input) ++g.inputs;
      if (*kind == NodeKind::output) ++g.outputs;
    } else if (tok[0] == "gru") {
      if (tok.size() != 2 + GruParams::kCount) fail("gru needs an id and 9 parameters");
      const int id = integer(tok[1]);
      NodeGene* node = nullptr;
      for (auto& n : g.nodes) {
        if (n.id == id) node = &n;
      }
      if (!node || node->kind != NodeKind::gru) fail("gru parameters for a non-gru node " + std::to_string(id));
      for (std::size_t k = 0; k < GruParams::kCount; ++k) node->gru->p[k] = number(tok[2 + k]);
    } else if (tok[0] == "link") {
      if (tok.size() != 7) fail("link needs innovation, from, to, weight, enabled, recurrent");
      g.links.push_back({integer(tok[1]), integer(tok[2]), integer(tok[3]), number(tok[4]), flag(tok[5]), flag(tok[6])});
    } else {
      fail("unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!header) throw ParseError(source, line_no, "empty genome file");
  try {
    validate(g);
  } catch (const Error& e) {
    throw ParseError(source, line_no, e.what());
  }
  return g;
}

void save_genome(const Genome& genome, const std::string& path) { text::write_file(path, to_text(genome)); }

Genome load_genome(const std::string& path) { return genome_from_text(text::read_file(path), path); }

}  // namespace navevo::neat
