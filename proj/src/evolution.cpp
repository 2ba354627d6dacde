#include "evonas/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "evonas/metrics.hpp"
#include "evonas/optimizer.hpp"
#include "evonas/trainer.hpp"

namespace evonas {

namespace {

constexpr std::uint64_t kShuffleTag = 0x5348;
constexpr std::uint64_t kFoldTag = 0x464f;
constexpr std::uint64_t kPopulationTag = 0x504f;
constexpr std::uint64_t kFinalTag = 0x46494e;

FoldResult run_fold(const Genotype& g, const Dataset& train, const Dataset& test, std::uint64_t seed,
                    const EvalOptions& options) {
  Matrix x_train = train.features;
  Matrix x_test = test.features;
  if (options.scale_features) {
    const Standardizer st = Standardizer::fit(x_train);
    x_train = st.transform(x_train);
    x_test = st.transform(x_test);
  }

  auto net = build_network<double>(g.to_config(static_cast<int>(train.attribute_count()), options.output_bias), seed);
  Optimizer<double> opt(g.optimizer);
  TrainOptions to;
  to.epochs = g.epochs;
  to.batch_size = g.batch_size;
  to.seed = seed;
  to.min_delta = options.min_delta;
  to.patience = options.patience;
  const TrainReport report = fit(net, opt, x_train, train.labels, to);

  FoldResult fold;
  fold.epochs_run = report.epochs_run;
  if (report.diverged) {
    fold.diverged = true;
    return fold;
  }
  const Eigen::VectorXd raw = predict_raw(net, x_test);
  if (!raw.allFinite()) {
    fold.diverged = true;
    return fold;
  }
  const Eigen::VectorXi predicted = raw.unaryExpr([](double v) { return v >= 0.5 ? 1 : 0; });
  const Eigen::VectorXd truth = test.labels.cast<double>();
  fold.f1 = f_measure(confusion(predicted, test.labels));
  const Eigen::VectorXd errors_on =
      options.error_mode == ErrorMode::Raw ? raw : Eigen::VectorXd(predicted.cast<double>());
  fold.mae = mae(errors_on, truth);
  fold.rmse = rmse(errors_on, truth);
  return fold;
}

}  // namespace

CvData prepare_cv(const Dataset& dataset, int k, std::uint64_t seed) {
  CvData cv;
  cv.original_rows.resize(static_cast<std::size_t>(dataset.size()));
  std::iota(cv.original_rows.begin(), cv.original_rows.end(), Eigen::Index{0});
  Rng rng(derive_seed(seed, kShuffleTag));
  shuffle_in_place(std::span(cv.original_rows), rng);
  cv.data = dataset.subset(cv.original_rows);
  cv.folds = k == 1 ? resubstitution(cv.data.size()) : kfold(cv.data, k, derive_seed(seed, kFoldTag));
  return cv;
}

std::uint64_t fold_seed(std::uint64_t seed, const Genotype& g, int fold) {
  return derive_seed(seed, g.hash(), static_cast<std::uint64_t>(fold));
}

FitnessRecord evaluate(const Genotype& g, const Dataset& dataset, const FoldSplit& folds,
                       std::uint64_t seed, const EvalOptions& options) {
  if (folds.assignments.size() != static_cast<std::size_t>(dataset.size()))
    throw std::invalid_argument("fold split does not match the dataset");
  const auto start = std::chrono::steady_clock::now();

  FitnessRecord rec;
  rec.genotype = g;
  rec.f_measure = rec.mae = rec.rmse = 0.0;
  for (int f = 0; f < folds.fold_count; ++f) {
    const Dataset train = dataset.subset(folds.train_indices(f));
    const Dataset test = dataset.subset(folds.test_indices(f));
    const FoldResult fold = run_fold(g, train, test, fold_seed(seed, g, f), options);
    rec.per_fold.push_back(fold);
    rec.f_measure += fold.f1;
    rec.mae += fold.mae;
    rec.rmse += fold.rmse;
    rec.diverged = rec.diverged || fold.diverged;
  }
  const double k = static_cast<double>(folds.fold_count);
  rec.f_measure /= k;
  rec.mae /= k;
  rec.rmse /= k;
  rec.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

TrainedModel train_final(const Genotype& g, const Dataset& dataset, std::uint64_t seed,
                         const EvalOptions& options) {
  TrainedModel model;
  model.seed = derive_seed(seed, kFinalTag, g.hash());
  Matrix x = dataset.features;
  if (options.scale_features) {
    model.scaler = Standardizer::fit(x);
    x = model.scaler->transform(x);
  }
  model.network =
      build_network<double>(g.to_config(static_cast<int>(dataset.attribute_count()), options.output_bias), model.seed);
  Optimizer<double> opt(g.optimizer);
  TrainOptions to;
  to.epochs = g.epochs;
  to.batch_size = g.batch_size;
  to.seed = model.seed;
  to.min_delta = options.min_delta;
  to.patience = options.patience;
  fit(model.network, opt, x, dataset.labels, to);
  return model;
}

std::size_t select_tournament(std::span<const FitnessRecord> population, std::size_t tournament_size,
                              Rng& rng) {
  if (population.empty()) throw std::invalid_argument("tournament on an empty population");
  const std::size_t n = population.size();
  const std::size_t draws = std::clamp<std::size_t>(tournament_size, 1, n);

  // Partial Fisher-Yates gives `draws` distinct indices.
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < draws; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(pool[i], pool[j]);
  }

  double best = -1.0;
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < draws; ++i) {
    const double f = population[pool[i]].f_measure;
    if (f > best) {
      best = f;
      tied.assign(1, pool[i]);
    } else if (f == best) {
      tied.push_back(pool[i]);
    }
  }
  return tied[static_cast<std::size_t>(uniform_index(rng, tied.size()))];
}

std::size_t select_roulette(std::span<const FitnessRecord> population, Rng& rng) {
  if (population.empty()) throw std::invalid_argument("roulette on an empty population");
  double total = 0.0;
  for (const auto& r : population) total += std::max(r.f_measure, 0.0);
  if (!(total > 0.0)) return static_cast<std::size_t>(uniform_index(rng, population.size()));
  const double target = uniform_real(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    const double f = std::max(population[i].f_measure, 0.0);
    if (f <= 0.0) continue;
    acc += f;
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

std::vector<std::size_t> rank_by_fitness(std::span<const FitnessRecord> population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].f_measure > population[b].f_measure;
  });
  return order;
}

void EvolutionConfig::validate() const {
  if (population_size < elitism + 2)
    throw std::invalid_argument("population size must be at least elitism + 2");
  if (elitism < 0) throw std::invalid_argument("elitism must be >= 0");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (crossover_rate < 0.0 || crossover_rate > 1.0)
    throw std::invalid_argument("crossover rate must lie in [0, 1]");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  if (tournament_size < 1) throw std::invalid_argument("tournament size must be >= 1");
  if (k_folds < 1) throw std::invalid_argument("fold count must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  genes.validate();
}

Evolution::Evolution(EvolutionConfig config, const Dataset& dataset)
    : config_(std::move(config)), rng_(derive_seed(config_.seed, kPopulationTag)) {
  config_.validate();
  dataset.validate();
  cv_ = prepare_cv(dataset, config_.k_folds, config_.seed);
}

const FitnessRecord& Evolution::best() const {
  if (population_.empty()) throw std::logic_error("population not initialized");
  return population_[rank_by_fitness(population_).front()];
}

std::vector<FitnessRecord> Evolution::evaluate_all(const std::vector<Genotype>& genotypes, int generation) {
  std::vector<FitnessRecord> out(genotypes.size());
  auto work = [&](std::size_t i) {
    out[i] = evaluate(genotypes[i], cv_.data, cv_.folds, config_.seed, config_.eval);
    out[i].evaluated_at_generation = generation;
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config_.jobs), genotypes.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < genotypes.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < genotypes.size(); i = next++) {
            try {
              work(i);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
            }
          }
        });
    }
    if (error) std::rethrow_exception(error);
  }
  evaluations_ += static_cast<long>(genotypes.size());
  return out;
}

std::size_t Evolution::select(Rng& rng) const {
  if (config_.selection == Selection::Roulette) return select_roulette(population_, rng);
  return select_tournament(population_, static_cast<std::size_t>(config_.tournament_size), rng);
}

GenerationReport Evolution::summarize(int generation, int evaluations) const {
  GenerationReport r;
  r.generation = generation;
  r.evaluations = evaluations;
  const auto order = rank_by_fitness(population_);
  const auto& top = population_[order.front()];
  r.best_fitness = top.f_measure;
  r.best_mae = top.mae;
  r.best_rmse = top.rmse;
  r.min_fitness = population_[order.back()].f_measure;
  double sum = 0.0;
  for (const auto& ind : population_) {
    sum += ind.f_measure;
    for (std::size_t i = 0; i < Genotype::kLength; ++i) ++r.histograms[i][ind.genotype.gene(i)];
  }
  r.mean_fitness = sum / static_cast<double>(population_.size());
  for (int e = 0; e < config_.elitism && e < static_cast<int>(order.size()); ++e)
    r.elites.push_back(population_[order[static_cast<std::size_t>(e)]].genotype);
  return r;
}

const GenerationReport& Evolution::initialize() {
  if (!history_.empty()) return history_.front();
  std::vector<Genotype> initial;
  for (int i = 0; i < config_.population_size; ++i) initial.push_back(random_genotype(config_.genes, rng_));
  population_ = evaluate_all(initial, 0);
  history_.push_back(summarize(0, config_.population_size));
  return history_.back();
}

const GenerationReport& Evolution::step() {
  initialize();
  const int generation = history_.back().generation + 1;
  const auto order = rank_by_fitness(population_);
  const auto size = static_cast<std::size_t>(config_.population_size);

  std::vector<FitnessRecord> next;
  next.reserve(size);
  for (int e = 0; e < config_.elitism; ++e) next.push_back(population_[order[static_cast<std::size_t>(e)]]);

  // Offspring that changed are collected for training; clones keep their record.
  std::vector<std::size_t> changed;
  while (next.size() < size) {
    const FitnessRecord& a = population_[select(rng_)];
    const FitnessRecord& b = population_[select(rng_)];
    std::array<FitnessRecord, 2> kids{a, b};
    if (bernoulli(rng_, config_.crossover_rate)) {
      auto [c1, c2] = crossover(a.genotype, b.genotype, rng_);
      kids[0].genotype = c1;
      kids[1].genotype = c2;
    }
    for (auto& kid : kids)
      if (bernoulli(rng_, config_.mutation_rate)) kid.genotype = mutate(kid.genotype, config_.genes, rng_);

    // A child identical to a parent inherits its record; evaluation is a
    // pure function of the genotype, so retraining would reproduce it.
    std::array<bool, 2> fresh{false, false};
    for (std::size_t k = 0; k < 2; ++k) {
      const Genotype g = kids[k].genotype;
      if (g == a.genotype)
        kids[k] = a;
      else if (g == b.genotype)
        kids[k] = b;
      else
        fresh[k] = true;
    }
    for (std::size_t k = 0; k < 2 && next.size() < size; ++k) {
      if (fresh[k]) changed.push_back(next.size());
      next.push_back(std::move(kids[k]));
    }
  }

  std::vector<Genotype> todo;
  for (std::size_t i : changed) todo.push_back(next[i].genotype);
  auto results = evaluate_all(todo, generation);
  for (std::size_t j = 0; j < changed.size(); ++j) next[changed[j]] = std::move(results[j]);

  population_ = std::move(next);
  history_.push_back(summarize(generation, static_cast<int>(changed.size())));
  return history_.back();
}

RunResult Evolution::run(const std::function<void(const GenerationReport&)>& on_generation) {
  initialize();
  const GenerationReport* report = &history_.back();
  if (on_generation && history_.size() == 1) on_generation(*report);
  while (report->generation + 1 < config_.generations && report->best_fitness < config_.target_fitness) {
    report = &step();
    if (on_generation) on_generation(*report);
  }
  RunResult result;
  result.best = best();
  result.history = history_;
  result.evaluations = evaluations_;
  result.trainings = evaluations_ * config_.k_folds;
  result.cv = cv_;
  return result;
}

}  // namespace evonas
