#include "evonas/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "evonas/metrics.hpp"

namespace evonas {

double GaussianNBModel::log_posterior(int cls, const Eigen::RowVectorXd& x) const {
  const auto c = static_cast<std::size_t>(cls);
  const Eigen::ArrayXXd var = variance[c].array();
  const Eigen::ArrayXXd diff = (x - mean[c]).array();
  return std::log(prior[c]) -
         0.5 * ((2.0 * std::numbers::pi * var).log() + diff.square() / var).sum();
}

GaussianNBModel gnb_fit(const Matrix& features, const Labels& labels) {
  GaussianNBModel m;
  const double n = static_cast<double>(labels.size());
  for (int cls = 0; cls < 2; ++cls) {
    IndexList rows;
    for (Eigen::Index i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) rows.push_back(i);
    if (rows.empty()) throw DatasetError("naive Bayes needs both classes in the training data");
    const Matrix x = features(rows, Eigen::all);
    const auto c = static_cast<std::size_t>(cls);
    m.prior[c] = static_cast<double>(rows.size()) / n;
    m.mean[c] = x.colwise().mean();
    m.variance[c] = ((x.rowwise() - m.mean[c]).array().square().colwise().sum() /
                     static_cast<double>(rows.size()))
                        .max(GaussianNBModel::kVarianceFloor)
                        .matrix();
  }
  return m;
}

Labels gnb_predict(const GaussianNBModel& model, const Matrix& x) {
  Labels out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::RowVectorXd row = x.row(i);
    out[i] = model.log_posterior(1, row) > model.log_posterior(0, row) ? 1 : 0;
  }
  return out;
}

KnnModel knn_fit(const Matrix& features, const Labels& labels, int k) {
  if (features.rows() == 0) throw DatasetError("kNN needs training data");
  KnnModel m;
  m.features = features;
  m.labels = labels;
  m.k = std::clamp(k, 1, static_cast<int>(features.rows()));
  return m;
}

Labels knn_predict(const KnnModel& model, const Matrix& x) {
  const auto n = static_cast<std::size_t>(model.features.rows());
  const auto k = static_cast<std::size_t>(model.k);
  Labels out(x.rows());
  std::vector<double> dist(n);
  std::vector<std::size_t> order(n);
  for (Eigen::Index q = 0; q < x.rows(); ++q) {
    for (std::size_t i = 0; i < n; ++i)
      dist[i] = (model.features.row(static_cast<Eigen::Index>(i)) - x.row(q)).norm();
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                      });
    std::array<int, 2> votes{0, 0};
    std::array<double, 2> summed{0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) {
      const auto cls = static_cast<std::size_t>(model.labels[static_cast<Eigen::Index>(order[j])]);
      ++votes[cls];
      summed[cls] += dist[order[j]];
    }
    if (votes[1] != votes[0])
      out[q] = votes[1] > votes[0] ? 1 : 0;
    else
      out[q] = summed[1] < summed[0] ? 1 : 0;
  }
  return out;
}

Genotype fixed_ann_genotype() {
  Genotype g;
  g.hidden_layers = 1;
  g.nodes = 16;
  g.input_activation = Activation::Relu;
  g.hidden_activation = Activation::Relu;
  g.output_activation = Activation::Sigmoid;
  g.optimizer = OptimizerKind::Adam;
  g.epochs = 50;
  g.batch_size = 4;
  return g;
}

BaselineResult fixed_ann(const CvData& cv, std::uint64_t seed, const EvalOptions& options) {
  const FitnessRecord rec = evaluate(fixed_ann_genotype(), cv.data, cv.folds, seed, options);
  return {"ANN", rec.mae, rec.rmse, rec.f_measure};
}

std::vector<BaselineResult> run_baselines(const CvData& cv, std::uint64_t seed, int knn_k,
                                          const EvalOptions& options) {
  BaselineResult gnb{"GNB"}, knn{"KNN"};
  const int k = cv.folds.fold_count;
  for (int f = 0; f < k; ++f) {
    const Dataset train = cv.data.subset(cv.folds.train_indices(f));
    const Dataset test = cv.data.subset(cv.folds.test_indices(f));
    Matrix x_train = train.features;
    Matrix x_test = test.features;
    if (options.scale_features) {
      const Standardizer st = Standardizer::fit(x_train);
      x_train = st.transform(x_train);
      x_test = st.transform(x_test);
    }
    const Eigen::VectorXd truth = test.labels.cast<double>();
    auto add = [&](BaselineResult& r, const Labels& pred) {
      const Eigen::VectorXd p = pred.cast<double>();
      r.mae += mae(p, truth);
      r.rmse += rmse(p, truth);
      r.f1 += f_measure(confusion(pred, test.labels));
    };
    add(gnb, gnb_predict(gnb_fit(x_train, train.labels), x_test));
    add(knn, knn_predict(knn_fit(x_train, train.labels, knn_k), x_test));
  }
  for (BaselineResult* r : {&gnb, &knn}) {
    r->mae /= k;
    r->rmse /= k;
    r->f1 /= k;
  }
  return {gnb, knn, fixed_ann(cv, seed, options)};
}

}  // namespace evonas
