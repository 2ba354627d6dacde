// evonas: evolve, evaluate and compare feed-forward binary classifiers.
//
//   evonas evolve    --dataset data.csv [--label-map m=0,r=1] --out run/
//   evonas eval      --dataset data.csv --genotype 1,16,relu,relu,sigmoid,adam,50,4
//   evonas baselines --dataset data.csv
//   evonas folds     --dataset data.csv --kfolds 5
//
// Every option may also be given in a key=value file passed with --config,
// using the option's long name as the key.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "evonas/baselines.hpp"
#include "evonas/dataset.hpp"
#include "evonas/evolution.hpp"
#include "evonas/genome.hpp"
#include "evonas/report.hpp"

namespace fs = std::filesystem;
using namespace evonas;

namespace {

struct Options {
  std::string dataset;
  std::string label_map;
  std::string label_column = "-1";
  std::vector<std::string> drop_columns;
  std::uint64_t seed = 0;
  int population = 25;
  int generations = 200;
  double crossover_rate = 0.77;
  double mutation_rate = 0.01;
  std::string selection = "tournament";
  int elitism = 2;
  int tournament_size = 2;
  int kfolds = 5;
  bool no_scale = false;
  int jobs = 1;
  std::string out = ".";
  std::string genotype;
  int knn_k = 5;
  bool selu = false;
  bool no_output_bias = false;
  std::string error_mode = "raw";
  int max_hidden_layers = 3;
  int max_nodes = 64;
  int max_epochs = 100;
  int max_batch_size = 64;
};

ColumnRef column_ref(const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return text;
}

Dataset load(const Options& o) {
  CsvOptions csv;
  csv.label_column = column_ref(o.label_column);
  for (const auto& d : o.drop_columns) csv.drop_columns.push_back(column_ref(d));
  if (!o.label_map.empty()) csv.label_map = parse_label_map(o.label_map);
  return load_csv(o.dataset, csv);
}

EvalOptions eval_options(const Options& o) {
  EvalOptions e;
  e.scale_features = !o.no_scale;
  e.output_bias = !o.no_output_bias;
  e.error_mode = o.error_mode == "binary" ? ErrorMode::Binary : ErrorMode::Raw;
  return e;
}

EvolutionConfig evolution_config(const Options& o) {
  EvolutionConfig c;
  c.population_size = o.population;
  c.generations = o.generations;
  c.crossover_rate = o.crossover_rate;
  c.mutation_rate = o.mutation_rate;
  c.selection = o.selection == "roulette" ? Selection::Roulette : Selection::Tournament;
  c.elitism = o.elitism;
  c.tournament_size = o.tournament_size;
  c.k_folds = o.kfolds;
  c.seed = o.seed;
  c.jobs = o.jobs;
  c.eval = eval_options(o);
  c.genes.hidden_layers.hi = o.max_hidden_layers;
  c.genes.nodes.hi = o.max_nodes;
  c.genes.epochs.hi = o.max_epochs;
  c.genes.batch_size.hi = o.max_batch_size;
  if (o.selu) c.genes = c.genes.with_selu();
  return c;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int cmd_evolve(const Options& o) {
  const Dataset data = load(o);
  const EvolutionConfig config = evolution_config(o);
  Evolution evo(config, data);

  const auto start = std::chrono::steady_clock::now();
  const RunResult result = evo.run([](const GenerationReport& r) {
    std::cout << "generation " << r.generation << " best_f1=" << r.best_fitness
              << " mean_f1=" << r.mean_fitness << " trained=" << r.evaluations << std::endl;
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  fs::create_directories(o.out);
  std::ostringstream history, diversity, fittest;
  write_history_csv(history, result.history);
  write_diversity_csv(diversity, result.history);
  const TrainedModel model = train_final(result.best.genotype, data, config.seed, config.eval);
  write_fittest(fittest, result.best, model);
  write_file(fs::path(o.out) / "history.csv", history.str());
  write_file(fs::path(o.out) / "diversity.csv", diversity.str());
  write_file(fs::path(o.out) / "fittest.txt", fittest.str());

  double train_seconds = 0.0;
  for (const auto& ind : evo.population()) train_seconds += ind.train_seconds;
  std::cout << "fittest " << format_genotype(result.best.genotype) << '\n'
            << format_metrics(result.best.f_measure, result.best.mae, result.best.rmse) << '\n'
            << "generations=" << result.history.size() << " evaluations=" << result.evaluations
            << " trainings=" << result.trainings << " wall_seconds=" << seconds
            << " final_population_train_seconds=" << train_seconds << '\n';
  return 0;
}

int cmd_eval(const Options& o) {
  const Genotype g = parse_genotype(o.genotype);
  const Dataset data = load(o);
  const CvData cv = prepare_cv(data, o.kfolds, o.seed);
  const FitnessRecord rec = evaluate(g, cv.data, cv.folds, o.seed, eval_options(o));
  std::cout << format_metrics(rec.f_measure, rec.mae, rec.rmse) << '\n';
  if (rec.diverged) std::cout << "warning: training diverged on at least one fold\n";
  return 0;
}

int cmd_baselines(const Options& o) {
  const Dataset data = load(o);
  const CvData cv = prepare_cv(data, o.kfolds, o.seed);
  const auto results = run_baselines(cv, o.seed, o.knn_k, eval_options(o));
  write_baseline_table(std::cout, data.name, results);
  return 0;
}

int cmd_folds(const Options& o) {
  const Dataset data = load(o);
  const CvData cv = prepare_cv(data, o.kfolds, o.seed);
  std::vector<int> by_row(cv.original_rows.size());
  for (std::size_t i = 0; i < cv.original_rows.size(); ++i)
    by_row[static_cast<std::size_t>(cv.original_rows[i])] = cv.folds.assignments[i];
  std::cout << "row,fold\n";
  for (std::size_t r = 0; r < by_row.size(); ++r) std::cout << r << ',' << by_row[r] << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve task-specific feed-forward binary classifiers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; keys are option names");

  Options o;
  app.add_option("--dataset", o.dataset, "CSV dataset")->check(CLI::ExistingFile);
  app.add_option("--label-map", o.label_map, "label text mapping, e.g. m=0,r=1");
  app.add_option("--label-column", o.label_column, "label column name or index (negative counts from end)");
  app.add_option("--drop-columns", o.drop_columns, "columns to ignore (names or indices)")->delimiter(',');
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--population", o.population, "population size")->check(CLI::PositiveNumber);
  app.add_option("--generations", o.generations, "generation limit")->check(CLI::PositiveNumber);
  app.add_option("--crossover-rate", o.crossover_rate, "per-pair crossover probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--mutation-rate", o.mutation_rate, "per-offspring mutation probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--selection", o.selection, "parent selection")->check(CLI::IsMember({"tournament", "roulette"}));
  app.add_option("--elitism", o.elitism, "elites copied unchanged")->check(CLI::NonNegativeNumber);
  app.add_option("--tournament-size", o.tournament_size, "tournament size")->check(CLI::PositiveNumber);
  app.add_option("--kfolds", o.kfolds, "cross-validation folds")->check(CLI::Range(2, 1000000));
  app.add_flag("--no-scale", o.no_scale, "disable feature standardization");
  app.add_option("--jobs", o.jobs, "concurrent genotype evaluations")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output directory for evolve");
  app.add_option("--genotype", o.genotype, "H,N,F_I,F_H,F_O,O,E,B for eval");
  app.add_option("--knn-k", o.knn_k, "neighbours for the kNN baseline")->check(CLI::PositiveNumber);
  app.add_flag("--selu", o.selu, "add selu to the activation gene set");
  app.add_flag("--no-output-bias", o.no_output_bias, "drop the output layer bias");
  app.add_option("--error-mode", o.error_mode, "MAE/RMSE on raw outputs or 0/1 predictions")
      ->check(CLI::IsMember({"raw", "binary"}));
  app.add_option("--max-hidden-layers", o.max_hidden_layers, "upper bound of H")->check(CLI::PositiveNumber);
  app.add_option("--max-nodes", o.max_nodes, "upper bound of N")->check(CLI::PositiveNumber);
  app.add_option("--max-epochs", o.max_epochs, "upper bound of E")->check(CLI::PositiveNumber);
  app.add_option("--max-batch-size", o.max_batch_size, "upper bound of B")->check(CLI::PositiveNumber);

  auto* evolve = app.add_subcommand("evolve", "run the genetic search and write history/diversity/fittest");
  auto* eval = app.add_subcommand("eval", "cross-validate one genotype");
  auto* baselines = app.add_subcommand("baselines", "GNB, kNN and the fixed ANN on identical folds");
  auto* folds = app.add_subcommand("folds", "print the fold of every row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (o.dataset.empty()) throw CLI::RequiredError("--dataset");
    if (*eval && o.genotype.empty()) throw CLI::RequiredError("--genotype");
    if (*evolve) return cmd_evolve(o);
    if (*eval) return cmd_eval(o);
    if (*baselines) return cmd_baselines(o);
    if (*folds) return cmd_folds(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
