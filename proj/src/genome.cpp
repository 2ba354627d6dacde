#include "evonas/genome.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace evonas {

namespace {

template <typename T>
T pick(const std::vector<T>& set, Rng& rng) {
  return set[static_cast<std::size_t>(uniform_index(rng, set.size()))];
}

template <typename T>
bool member(const std::vector<T>& set, T v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

int parse_int_gene(const std::string& text, const char* gene) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("gene ") + gene + ": '" + text + "' is not an integer");
  }
}

}  // namespace

void GeneSpace::validate() const {
  for (const IntRange* r : {&hidden_layers, &nodes, &epochs, &batch_size})
    if (r->lo > r->hi) throw std::invalid_argument("empty gene range");
  if (hidden_layers.lo < 0 || nodes.lo < 1 || epochs.lo < 1 || batch_size.lo < 1)
    throw std::invalid_argument("gene range below its structural minimum");
  if (activations.empty()) throw std::invalid_argument("empty activation set");
  if (optimizers.empty()) throw std::invalid_argument("empty optimizer set");
}

std::uint64_t GeneSpace::size() const {
  const std::uint64_t acts = activations.size();
  return hidden_layers.count() * nodes.count() * acts * acts * acts * optimizers.size() *
         epochs.count() * batch_size.count();
}

GeneSpace GeneSpace::with_selu() const {
  GeneSpace s = *this;
  if (!member(s.activations, Activation::Selu)) s.activations.push_back(Activation::Selu);
  return s;
}

int Genotype::gene(std::size_t index) const {
  switch (index) {
    case 0: return hidden_layers;
    case 1: return nodes;
    case 2: return static_cast<int>(input_activation);
    case 3: return static_cast<int>(hidden_activation);
    case 4: return static_cast<int>(output_activation);
    case 5: return static_cast<int>(optimizer);
    case 6: return epochs;
    case 7: return batch_size;
  }
  throw std::out_of_range("gene index " + std::to_string(index));
}

void Genotype::set_gene(std::size_t index, int value) {
  switch (index) {
    case 0: hidden_layers = value; return;
    case 1: nodes = value; return;
    case 2: input_activation = static_cast<Activation>(value); return;
    case 3: hidden_activation = static_cast<Activation>(value); return;
    case 4: output_activation = static_cast<Activation>(value); return;
    case 5: optimizer = static_cast<OptimizerKind>(value); return;
    case 6: epochs = value; return;
    case 7: batch_size = value; return;
  }
  throw std::out_of_range("gene index " + std::to_string(index));
}

bool Genotype::valid_in(const GeneSpace& space) const {
  return space.hidden_layers.contains(hidden_layers) && space.nodes.contains(nodes) &&
         member(space.activations, input_activation) && member(space.activations, hidden_activation) &&
         member(space.activations, output_activation) && member(space.optimizers, optimizer) &&
         space.epochs.contains(epochs) && space.batch_size.contains(batch_size);
}

NetworkConfig Genotype::to_config(int input_dim, bool output_bias) const {
  NetworkConfig c;
  c.hidden_layers = hidden_layers;
  c.nodes = nodes;
  c.input_activation = input_activation;
  c.hidden_activation = hidden_activation;
  c.output_activation = output_activation;
  c.optimizer = optimizer;
  c.epochs = epochs;
  c.batch_size = batch_size;
  c.input_dim = input_dim;
  c.output_bias = output_bias;
  return c;
}

Genotype Genotype::from_config(const NetworkConfig& c) {
  Genotype g;
  g.hidden_layers = c.hidden_layers;
  g.nodes = c.nodes;
  g.input_activation = c.input_activation;
  g.hidden_activation = c.hidden_activation;
  g.output_activation = c.output_activation;
  g.optimizer = c.optimizer;
  g.epochs = c.epochs;
  g.batch_size = c.batch_size;
  return g;
}

std::uint64_t Genotype::hash() const {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::size_t i = 0; i < kLength; ++i)
    h = mix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(gene(i))) + (i << 40)));
  return h;
}

std::string gene_value_string(const Genotype& g, std::size_t index) {
  switch (index) {
    case 2: return std::string(to_string(g.input_activation));
    case 3: return std::string(to_string(g.hidden_activation));
    case 4: return std::string(to_string(g.output_activation));
    case 5: return std::string(to_string(g.optimizer));
    default: return std::to_string(g.gene(index));
  }
}

std::string format_genotype(const Genotype& g) {
  std::string out;
  for (std::size_t i = 0; i < Genotype::kLength; ++i) {
    if (i) out += ',';
    out += gene_value_string(g, i);
  }
  return out;
}

Genotype parse_genotype(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t\r\n");
    parts.push_back(b == std::string::npos ? std::string{} : item.substr(b, e - b + 1));
  }
  if (parts.size() != Genotype::kLength)
    throw ParseError("genotype needs 8 comma-separated genes (H,N,F_I,F_H,F_O,O,E,B), got " +
                     std::to_string(parts.size()));
  Genotype g;
  g.hidden_layers = parse_int_gene(parts[0], "H");
  g.nodes = parse_int_gene(parts[1], "N");
  g.input_activation = parse_activation(parts[2]);
  g.hidden_activation = parse_activation(parts[3]);
  g.output_activation = parse_activation(parts[4]);
  g.optimizer = parse_optimizer(parts[5]);
  g.epochs = parse_int_gene(parts[6], "E");
  g.batch_size = parse_int_gene(parts[7], "B");
  return g;
}

Genotype random_genotype(const GeneSpace& space, Rng& rng) {
  Genotype g;
  for (std::size_t i = 0; i < Genotype::kLength; ++i) g = mutate_gene(g, i, space, rng);
  return g;
}

Genotype mutate_gene(const Genotype& g, std::size_t index, const GeneSpace& space, Rng& rng) {
  Genotype out = g;
  switch (index) {
    case 0: out.hidden_layers = uniform_int(rng, space.hidden_layers.lo, space.hidden_layers.hi); break;
    case 1: out.nodes = uniform_int(rng, space.nodes.lo, space.nodes.hi); break;
    case 2: out.input_activation = pick(space.activations, rng); break;
    case 3: out.hidden_activation = pick(space.activations, rng); break;
    case 4: out.output_activation = pick(space.activations, rng); break;
    case 5: out.optimizer = pick(space.optimizers, rng); break;
    case 6: out.epochs = uniform_int(rng, space.epochs.lo, space.epochs.hi); break;
    case 7: out.batch_size = uniform_int(rng, space.batch_size.lo, space.batch_size.hi); break;
    default: throw std::out_of_range("gene index " + std::to_string(index));
  }
  return out;
}

Genotype mutate(const Genotype& g, const GeneSpace& space, Rng& rng) {
  const auto index = static_cast<std::size_t>(uniform_index(rng, Genotype::kLength));
  return mutate_gene(g, index, space, rng);
}

std::pair<Genotype, Genotype> crossover_at(const Genotype& a, const Genotype& b, std::size_t r) {
  if (r >= Genotype::kLength) throw std::out_of_range("crossover point " + std::to_string(r));
  Genotype first = a;
  Genotype second = b;
  for (std::size_t i = 0; i <= r; ++i) {
    first.set_gene(i, b.gene(i));
    second.set_gene(i, a.gene(i));
  }
  return {first, second};
}

std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, Rng& rng) {
  return crossover_at(a, b, static_cast<std::size_t>(uniform_index(rng, Genotype::kLength)));
}

}  // namespace evonas
