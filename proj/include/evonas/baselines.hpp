#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evonas/dataset.hpp"
#include "evonas/evolution.hpp"
#include "evonas/genome.hpp"

namespace evonas {

/// Gaussian naive Bayes with independent per-feature normals per class.
struct GaussianNBModel {
  static constexpr double kVarianceFloor = 1e-9;

  std::array<double, 2> prior{};
  std::array<Eigen::RowVectorXd, 2> mean;
  std::array<Eigen::RowVectorXd, 2> variance;

  /// log p(class) + sum_j log N(x_j; mean, variance) for one row.
  double log_posterior(int cls, const Eigen::RowVectorXd& x) const;
};

/// Throws DatasetError unless both classes are present.
GaussianNBModel gnb_fit(const Matrix& features, const Labels& labels);
/// Higher log-posterior wins; ties go to class 0.
Labels gnb_predict(const GaussianNBModel& model, const Matrix& x);

struct KnnModel {
  Matrix features;
  Labels labels;
  int k = 5;
};

/// Stores the training set; k is clamped to the training size.
KnnModel knn_fit(const Matrix& features, const Labels& labels, int k = 5);
/// Majority label of the k nearest rows by Euclidean distance. Equal
/// distances prefer the lower training index; a tied vote goes to the class
/// with the smaller summed distance, then to class 0.
Labels knn_predict(const KnnModel& model, const Matrix& x);

/// [1,16,relu,relu,sigmoid,adam,50,4]
Genotype fixed_ann_genotype();

struct BaselineResult {
  std::string name;
  double mae = 0.0;
  double rmse = 0.0;
  double f1 = 0.0;
};

/// Mean test-fold MAE/RMSE/F1 for GNB and kNN (on 0/1 predictions) and the
/// fixed ANN, all on the folds `cv`. Features are standardized with training
/// fold statistics when `options.scale_features` is set.
std::vector<BaselineResult> run_baselines(const CvData& cv, std::uint64_t seed, int knn_k = 5,
                                          const EvalOptions& options = {});

/// Fixed ANN alone under the same protocol as evolution fitness.
BaselineResult fixed_ann(const CvData& cv, std::uint64_t seed, const EvalOptions& options = {});

}  // namespace evonas
