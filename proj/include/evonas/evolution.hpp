#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "evonas/dataset.hpp"
#include "evonas/genome.hpp"
#include "evonas/network.hpp"
#include "evonas/random.hpp"

namespace evonas {

enum class Selection { Tournament, Roulette };

/// Whether MAE/RMSE are measured on the network's raw outputs or on the
/// thresholded 0/1 predictions. F1 always uses thresholded predictions.
enum class ErrorMode { Raw, Binary };

struct EvalOptions {
  bool scale_features = true;
  ErrorMode error_mode = ErrorMode::Raw;
  bool output_bias = true;
  double min_delta = 1e-4;
  int patience = 5;
};

struct FoldResult {
  double f1 = 0.0;
  double mae = 1.0;
  double rmse = 1.0;
  int epochs_run = 0;
  bool diverged = false;
};

/// Cross-validated score of one genotype. The headline numbers are means
/// over `per_fold`; f_measure is the fitness.
struct FitnessRecord {
  Genotype genotype;
  double f_measure = 0.0;
  double mae = 1.0;
  double rmse = 1.0;
  std::vector<FoldResult> per_fold;
  double train_seconds = 0.0;
  int evaluated_at_generation = 0;
  bool diverged = false;
};

/// The dataset after the once-per-run shuffle, with its fold assignment.
struct CvData {
  Dataset data;
  FoldSplit folds;
  /// data row i is row original_rows[i] of the input.
  IndexList original_rows;
};

CvData prepare_cv(const Dataset& dataset, int k, std::uint64_t seed);

/// Seed for training fold `fold` of genotype `g`; independent of evaluation
/// order.
std::uint64_t fold_seed(std::uint64_t seed, const Genotype& g, int fold);

/// Builds, trains and tests `g` on every fold. A fold whose training
/// diverges scores F1 = 0, MAE = RMSE = 1.
FitnessRecord evaluate(const Genotype& g, const Dataset& dataset, const FoldSplit& folds,
                       std::uint64_t seed, const EvalOptions& options = {});

/// Trains `g` on all of `dataset` for export. The scaler is set when feature
/// scaling is enabled.
struct TrainedModel {
  DenseNetwork<double> network;
  std::optional<Standardizer> scaler;
  std::uint64_t seed = 0;
};
TrainedModel train_final(const Genotype& g, const Dataset& dataset, std::uint64_t seed,
                         const EvalOptions& options = {});

/// Index of the winner among `tournament_size` distinct individuals drawn
/// uniformly; ties are broken uniformly.
std::size_t select_tournament(std::span<const FitnessRecord> population, std::size_t tournament_size,
                              Rng& rng);

/// Fitness-proportional pick; uniform when no fitness is positive.
std::size_t select_roulette(std::span<const FitnessRecord> population, Rng& rng);

struct EvolutionConfig {
  int population_size = 25;
  int generations = 200;
  double crossover_rate = 0.77;
  double mutation_rate = 0.01;
  int tournament_size = 2;
  int elitism = 2;
  Selection selection = Selection::Tournament;
  /// 1 trains and tests on every row (toy problems only).
  int k_folds = 5;
  GeneSpace genes;
  std::uint64_t seed = 0;
  /// Maximum concurrent genotype evaluations.
  int jobs = 1;
  /// Run ends once the best fitness reaches this value.
  double target_fitness = 1.0;
  EvalOptions eval;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct GenerationReport {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double min_fitness = 0.0;
  double best_mae = 0.0;
  double best_rmse = 0.0;
  /// Per gene: encoded value -> count in the population.
  std::array<std::map<int, int>, Genotype::kLength> histograms;
  std::vector<Genotype> elites;
  int evaluations = 0;
};

struct RunResult {
  FitnessRecord best;
  std::vector<GenerationReport> history;
  long evaluations = 0;
  long trainings = 0;
  CvData cv;
};

/// Generational GA with elitism. Generation 0 is the random initial
/// population; each later generation keeps the elites unchanged and fills
/// the rest with (possibly crossed, possibly mutated) offspring of selected
/// parents. Only new or changed genotypes are trained.
class Evolution {
 public:
  Evolution(EvolutionConfig config, const Dataset& dataset);

  /// Creates and evaluates the initial population if not done yet.
  const GenerationReport& initialize();
  const GenerationReport& step();
  RunResult run(const std::function<void(const GenerationReport&)>& on_generation = {});

  const std::vector<FitnessRecord>& population() const { return population_; }
  const std::vector<GenerationReport>& history() const { return history_; }
  const CvData& cv() const { return cv_; }
  const EvolutionConfig& config() const { return config_; }
  long evaluations() const { return evaluations_; }
  const FitnessRecord& best() const;

 private:
  /// Evaluates the listed genotypes, possibly in parallel; results by index.
  std::vector<FitnessRecord> evaluate_all(const std::vector<Genotype>& genotypes, int generation);
  std::size_t select(Rng& rng) const;
  GenerationReport summarize(int generation, int evaluations) const;

  EvolutionConfig config_;
  CvData cv_;
  Rng rng_;
  std::vector<FitnessRecord> population_;
  std::vector<GenerationReport> history_;
  long evaluations_ = 0;
};

/// Population indices from fittest to least fit; ties keep population order.
std::vector<std::size_t> rank_by_fitness(std::span<const FitnessRecord> population);

}  // namespace evonas
