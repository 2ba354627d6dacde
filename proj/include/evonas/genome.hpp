#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evonas/network.hpp"
#include "evonas/random.hpp"
#include "evonas/types.hpp"

namespace evonas {

struct IntRange {
  int lo = 1;
  int hi = 1;

  bool contains(int v) const { return v >= lo && v <= hi; }
  std::uint64_t count() const { return static_cast<std::uint64_t>(hi - lo + 1); }
  bool operator==(const IntRange&) const = default;
};

/// Allowed values for each gene. Defaults are the published gene sets.
struct GeneSpace {
  IntRange hidden_layers{1, 3};
  IntRange nodes{1, 64};
  std::vector<Activation> activations{kDefaultActivations.begin(), kDefaultActivations.end()};
  std::vector<OptimizerKind> optimizers{kAllOptimizers.begin(), kAllOptimizers.end()};
  IntRange epochs{1, 100};
  IntRange batch_size{1, 64};

  /// Throws std::invalid_argument on an empty range or set.
  void validate() const;

  /// Number of distinct genotypes.
  std::uint64_t size() const;

  /// Adds Selu to the activation set.
  GeneSpace with_selu() const;
};

/// Fixed-length genotype in the order [H, N, F_I, F_H, F_O, O, E, B].
struct Genotype {
  static constexpr std::size_t kLength = 8;

  int hidden_layers = 1;
  int nodes = 1;
  Activation input_activation = Activation::Relu;
  Activation hidden_activation = Activation::Relu;
  Activation output_activation = Activation::Sigmoid;
  OptimizerKind optimizer = OptimizerKind::Adam;
  int epochs = 1;
  int batch_size = 1;

  /// Gene i encoded as an integer: numeric genes by value, categorical genes
  /// by enum ordinal.
  int gene(std::size_t index) const;
  void set_gene(std::size_t index, int value);

  bool valid_in(const GeneSpace& space) const;
  NetworkConfig to_config(int input_dim, bool output_bias = true) const;
  static Genotype from_config(const NetworkConfig& config);

  /// Stable across platforms and runs.
  std::uint64_t hash() const;

  bool operator==(const Genotype&) const = default;
};

inline constexpr std::array<const char*, Genotype::kLength> kGeneNames{"H", "N", "F_I", "F_H",
                                                                      "F_O", "O", "E", "B"};

/// "2,16,relu,tanh,sigmoid,adam,90,16"
std::string format_genotype(const Genotype& g);
/// Inverse of format_genotype; names are case-insensitive. Throws ParseError.
Genotype parse_genotype(const std::string& text);
/// Human-readable value of one gene ("relu", "64", ...).
std::string gene_value_string(const Genotype& g, std::size_t index);

/// Every gene drawn uniformly and independently from its set.
Genotype random_genotype(const GeneSpace& space, Rng& rng);

/// Redraws gene `index` uniformly from its set; the draw may repeat the
/// current value.
Genotype mutate_gene(const Genotype& g, std::size_t index, const GeneSpace& space, Rng& rng);

/// Picks a gene uniformly and redraws it.
Genotype mutate(const Genotype& g, const GeneSpace& space, Rng& rng);

/// One-point crossover at cut `r` in [0, 7]: genes 0..r are exchanged.
/// Returns (b[0..r] ++ a[r+1..], a[0..r] ++ b[r+1..]).
std::pair<Genotype, Genotype> crossover_at(const Genotype& a, const Genotype& b, std::size_t r);

/// crossover_at with r uniform on {0..7}.
std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, Rng& rng);

}  // namespace evonas
