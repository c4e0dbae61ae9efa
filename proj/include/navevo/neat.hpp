#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "navevo/random.hpp"

namespace navevo::neat {

// --- genome ------------------------------------------------------------------

enum class NodeKind { input, bias, output, hidden, gru };

const char* to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view s);

/// Scalar GRU over the summed weighted input a:
///   z = sig(wz a + uz h + bz), r = sig(wr a + ur h + br),
///   c = tanh(wc a + uc (r h) + bc), h' = (1 - z) h + z c.
struct GruParams {
  static constexpr std::size_t kCount = 9;
  std::array<double, kCount> p{};  // wz uz bz wr ur br wc uc bc

  double& wz() { return p[0]; }
  double& uz() { return p[1]; }
  double& bz() { return p[2]; }
  double& wr() { return p[3]; }
  double& ur() { return p[4]; }
  double& br() { return p[5]; }
  double& wc() { return p[6]; }
  double& uc() { return p[7]; }
  double& bc() { return p[8]; }
  double wz() const { return p[0]; }
  double uz() const { return p[1]; }
  double bz() const { return p[2]; }
  double wr() const { return p[3]; }
  double ur() const { return p[4]; }
  double br() const { return p[5]; }
  double wc() const { return p[6]; }
  double uc() const { return p[7]; }
  double bc() const { return p[8]; }

  friend bool operator==(const GruParams&, const GruParams&) = default;
};

struct NodeGene {
  int id = 0;
  NodeKind kind = NodeKind::hidden;
  std::optional<GruParams> gru;  // present iff kind == gru

  friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct LinkGene {
  int innovation = 0;
  int from = 0;
  int to = 0;
  double weight = 0.0;
  bool enabled = true;
  bool recurrent = false;  // reads the source's previous-tick output

  friend bool operator==(const LinkGene&, const LinkGene&) = default;
};

/// Node ids: inputs 0..n-1, bias n, outputs n+1..n+m, then hidden nodes.
/// Nodes are kept sorted by id and links by innovation.
struct Genome {
  std::uint64_t id = 0;
  int inputs = 0;
  int outputs = 0;
  std::vector<NodeGene> nodes;
  std::vector<LinkGene> links;
  double fitness = 0.0;
  int species_id = -1;

  int bias_id() const { return inputs; }
  int output_id(int k) const { return inputs + 1 + k; }
  const NodeGene* node(int id) const;
  const LinkGene* link(int from, int to) const;
  int count(NodeKind kind) const;
  int hidden_count() const { return count(NodeKind::hidden) + count(NodeKind::gru); }
  /// Structural and parametric equality; fitness, id and species are ignored.
  bool same_genes(const Genome& other) const { return nodes == other.nodes && links == other.links; }
};

/// Throws navevo::Error describing the first broken invariant: endpoint
/// existence, unique ids and (from, to) pairs, sorted genes, GRU parameter
/// presence, no links into inputs, acyclic feed-forward links, and links out
/// of output nodes marked recurrent.
void validate(const Genome& genome);

/// Quantizes every weight and GRU parameter so that the text format
/// round-trips exactly.
void quantize_weights(Genome& genome);
constexpr int kWeightDecimals = 9;

// --- innovations ---------------------------------------------------------------

/// Run-wide registry of structural innovations. The same (from, to) link and
/// the same split of a given link always map to the same numbers.
class InnovationTable {
public:
  InnovationTable() = default;
  InnovationTable(int next_node, int next_innovation) : next_node_(next_node), next_innovation_(next_innovation) {}

  int link_innovation(int from, int to);
  /// Node id for splitting link `innovation` with a node of `kind`. When the
  /// genome already holds that node a fresh id is allocated.
  int split_node(int innovation, NodeKind kind, const Genome& genome);

  int next_node() const { return next_node_; }
  int next_innovation() const { return next_innovation_; }

  struct Snapshot {
    int next_node = 0;
    int next_innovation = 0;
    std::vector<std::array<int, 3>> links;   // from, to, innovation
    std::vector<std::array<int, 3>> splits;  // innovation, kind, node
  };
  Snapshot snapshot() const;
  static InnovationTable restore(const Snapshot& s);

  friend bool operator==(const InnovationTable&, const InnovationTable&) = default;

private:
  int next_node_ = 0;
  int next_innovation_ = 0;
  std::map<std::pair<int, int>, int> links_;
  std::map<std::pair<int, int>, int> splits_;
};

/// Inputs, bias and outputs with every input-side node linked to every
/// output; weights uniform in [-1, 1].
Genome minimal_genome(int inputs, int outputs, InnovationTable& table, Rng& rng);

// --- mutation ----------------------------------------------------------------

struct MutationParams {
  double weight_prob = 0.8;     // per genome
  double severe_prob = 0.1;     // per weight event
  double weight_power = 1.5;
  double gru_power = 1.5;
  double add_link_prob = 0.05;
  double add_node_prob = 0.005;
  double add_gru_prob = 0.003;
  bool gru_enabled = true;
  int add_link_attempts = 20;
};

/// Splits a random enabled link with a node of `kind` (hidden or gru). The
/// incoming link gets weight 1, the outgoing one the old weight. Returns
/// false when there is no enabled link.
bool mutate_add_node(Genome& genome, Rng& rng, InnovationTable& table, NodeKind kind = NodeKind::hidden);
bool mutate_add_gru_node(Genome& genome, Rng& rng, InnovationTable& table);
/// Adds a link between a random unconnected pair. Links that would close a
/// cycle, or that start at an output, are recurrent. Returns false when no
/// pair was found within the attempt budget.
bool mutate_add_link(Genome& genome, Rng& rng, InnovationTable& table, int attempts = 20);
/// Every weight: add U(-power, power), or with `severe_prob` replace by it.
/// GRU parameters use `gru_power`.
void mutate_weights(Genome& genome, double power, double gru_power, double severe_prob, Rng& rng);
/// Full per-offspring pipeline.
void mutate(Genome& genome, const MutationParams& params, Rng& rng, InnovationTable& table);

/// NEAT crossover. The child has the topology of the fitter parent `a`;
/// matching link weights and GRU parameters come from a random parent, and a
/// gene disabled in either parent stays disabled with probability 0.75.
Genome crossover(const Genome& a, const Genome& b, Rng& rng);

// --- speciation ----------------------------------------------------------------

struct CompatibilityParams {
  double excess = 1.0;
  double disjoint = 1.0;
  double weight = 0.4;
  double threshold = 3.0;
  int small_genome = 20;  // below this many link genes N = 1
};

double compatibility_distance(const Genome& a, const Genome& b, const CompatibilityParams& params = {});

// --- network -----------------------------------------------------------------

double sigmoid(double x);

/// Executable phenotype. Plain nodes apply the logistic sigmoid to their
/// weighted input sum; GRU nodes apply the gated update and output the new
/// hidden state. Recurrent links read the previous tick.
class Network {
public:
  explicit Network(const Genome& genome);

  void reset();
  /// One synchronous tick; returns the output node activations in (0, 1).
  const std::vector<double>& activate(const std::vector<double>& inputs);

  int input_count() const { return inputs_; }
  int output_count() const { return static_cast<int>(output_slots_.size()); }

private:
  struct Incoming {
    int source;  // slot
    double weight;
    bool recurrent;
  };
  struct Unit {
    int slot;
    bool gru;
    GruParams params;
    std::vector<Incoming> incoming;
  };

  int inputs_ = 0;
  int bias_slot_ = 0;
  std::vector<Unit> units_;  // evaluation order
  std::vector<int> output_slots_;
  std::vector<double> current_;
  std::vector<double> previous_;
  std::vector<double> outputs_;
};

/// Linear map from a sigmoid output to a wheel speed in [-max, max].
double wheel_speed(double output, double max_speed);

// --- population ----------------------------------------------------------------

struct Species {
  int id = 0;
  Genome representative;
  std::vector<std::size_t> members;  // indices into Population::genomes
  double best_fitness = 0.0;         // best seen so far
  int staleness = 0;                 // generations without improvement
  int created = 0;
};

struct ReproductionParams {
  double survival_threshold = 0.55;
  int elite_min_species_size = 5;
  int stagnation_limit = 15;
  bool crossover = false;
  double crossover_prob = 0.75;
  MutationParams mutation;
  CompatibilityParams compatibility;
};

struct Population {
  std::vector<Genome> genomes;
  std::vector<Species> species;
  int generation = 0;
  std::uint64_t next_genome_id = 0;
  int next_species_id = 0;
  InnovationTable innovations;
};

Population init_population(int size, int inputs, int outputs, const CompatibilityParams& compat, std::uint64_t seed);

/// Places every genome in the first species whose representative is within
/// the compatibility threshold, creating species as needed. Empty species are
/// dropped.
void speciate(Population& pop, const CompatibilityParams& params);

/// Number of members of a species of size n that may reproduce.
int survivor_count(int n, double threshold);

/// Splits `total` offspring in proportion to `shares` by largest remainder;
/// ties go to the lower index. All-zero shares fall back to `fallback`.
std::vector<int> allocate_offspring(const std::vector<double>& shares, const std::vector<double>& fallback, int total);

/// Consumes the fitness values of the current generation and replaces the
/// genomes with the next one, already speciated.
void reproduce(Population& pop, const ReproductionParams& params, Rng& rng);

/// Genomes sorted by descending fitness, ties by ascending id.
std::vector<const Genome*> ranked(const std::vector<Genome>& genomes);

// --- text format ---------------------------------------------------------------

std::string to_text(const Genome& genome);
Genome genome_from_text(std::string_view text, const std::string& source = "<genome>");
void save_genome(const Genome& genome, const std::string& path);
Genome load_genome(const std::string& path);

}  // namespace navevo::neat
