#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "evonas/baselines.hpp"
#include "evonas/dataset.hpp"
#include "evonas/evolution.hpp"
#include "evonas/network.hpp"

namespace evonas {

/// "f1=0.920 mae=0.151 rmse=0.236"
std::string format_metrics(double f1, double mae, double rmse);

/// generation,best_f1,mean_f1,best_mae,best_rmse
void write_history_csv(std::ostream& out, std::span<const GenerationReport> history);

/// generation,gene,value,count for every gene value present in the population.
void write_diversity_csv(std::ostream& out, std::span<const GenerationReport> history);

/// Genotype line, metrics line, then the serialized network.
void write_fittest(std::ostream& out, const FitnessRecord& best, const TrainedModel& model);

/// Algorithm/metric/value block, metrics ordered MAE, RMSE, F1.
void write_baseline_table(std::ostream& out, const std::string& dataset_name,
                          std::span<const BaselineResult> results);

/// Plain-text network dump: a header with the configuration and seed, then
/// each layer's weights (row-major) and bias in round-trip precision.
void write_network(std::ostream& out, const DenseNetwork<double>& net, std::uint64_t seed,
                   const std::optional<Standardizer>& scaler = std::nullopt);

struct LoadedNetwork {
  DenseNetwork<double> network;
  std::uint64_t seed = 0;
  std::optional<Standardizer> scaler;
};

/// Reads the block written by write_network. Throws ParseError.
LoadedNetwork read_network(std::istream& in);

}  // namespace evonas
