#include "evonas/trainer.hpp"

#include <limits>

#include <gtest/gtest.h>

namespace evonas {
namespace {

using Mat = Eigen::MatrixXd;

NetworkConfig small(int dim) {
  NetworkConfig c;
  c.hidden_layers = 1;
  c.nodes = 8;
  c.input_activation = Activation::Tanh;
  c.hidden_activation = Activation::Tanh;
  c.input_dim = dim;
  return c;
}

struct Xor {
  Mat x = (Mat(4, 2) << 0, 0, 0, 1, 1, 0, 1, 1).finished();
  Eigen::VectorXi y = (Eigen::VectorXi(4) << 0, 1, 1, 0).finished();
};

Mat ramp(int n) {
  Mat x(n, 2);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = (i - n / 2) / static_cast<double>(n);
    x(i, 1) = ((i * 7) % n) / static_cast<double>(n) - 0.5;
  }
  return x;
}

Eigen::VectorXi ramp_labels(int n) {
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) y[i] = i >= n / 2 ? 1 : 0;
  return y;
}

TEST(Fit, BatchOfOneUpdatesPerSample) {
  auto net = build_network(small(2), 1);
  Optimizer<double> opt(OptimizerKind::Adam);
  TrainOptions o;
  o.epochs = 3;
  o.batch_size = 1;
  o.patience = 0;
  const auto r = fit(net, opt, ramp(10), ramp_labels(10), o);
  EXPECT_EQ(r.updates, 30);
  EXPECT_EQ(r.epochs_run, 3);
}

TEST(Fit, FullBatchUpdatesOncePerEpoch) {
  auto net = build_network(small(2), 1);
  Optimizer<double> opt(OptimizerKind::Adam);
  TrainOptions o;
  o.epochs = 4;
  o.batch_size = 64;  // larger than the data
  o.patience = 0;
  const auto r = fit(net, opt, ramp(10), ramp_labels(10), o);
  EXPECT_EQ(r.updates, 4);
}

TEST(Fit, ShortLastBatch) {
  auto net = build_network(small(2), 1);
  Optimizer<double> opt(OptimizerKind::Adam);
  TrainOptions o;
  o.epochs = 2;
  o.batch_size = 4;
  o.patience = 0;
  EXPECT_EQ(fit(net, opt, ramp(10), ramp_labels(10), o).updates, 6);
}

TEST(Fit, XorConverges) {
  const Xor data;
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto net = build_network(small(2), seed);
    OptimizerHyper h = OptimizerHyper::defaults(OptimizerKind::Adam);
    h.learning_rate = 0.05;
    Optimizer<double> opt(OptimizerKind::Adam, h);
    TrainOptions o;
    o.epochs = 500;
    o.batch_size = 4;
    o.seed = seed;
    o.patience = 0;
    fit(net, opt, data.x, data.y, o);
    if (predict_binary(net, data.x) == data.y) ++solved;
  }
  EXPECT_GE(solved, 8);
}

TEST(Fit, FullBatchSmallStepLossIsMonotone) {
  auto net = build_network(small(2), 3);
  OptimizerHyper h;
  h.learning_rate = 1e-3;
  h.momentum = 0.0;
  Optimizer<double> opt(OptimizerKind::Sgd, h);
  TrainOptions o;
  o.epochs = 50;
  o.batch_size = 40;
  o.patience = 0;
  const auto r = fit(net, opt, ramp(40), ramp_labels(40), o);
  ASSERT_EQ(r.epoch_loss.size(), 50u);
  for (std::size_t i = 1; i < r.epoch_loss.size(); ++i) EXPECT_LE(r.epoch_loss[i], r.epoch_loss[i - 1]);
}

TEST(Fit, Deterministic) {
  auto run = [] {
    auto net = build_network(small(2), 8);
    Optimizer<double> opt(OptimizerKind::Nadam);
    TrainOptions o;
    o.epochs = 5;
    o.batch_size = 3;
    o.seed = 8;
    fit(net, opt, ramp(20), ramp_labels(20), o);
    return net.layers[1].weights;
  };
  EXPECT_EQ(run(), run());
}

TEST(Fit, EarlyStoppingOnFlatLoss) {
  auto c = small(2);
  auto net = build_network(c, 1);
  OptimizerHyper h;
  h.learning_rate = 0.0;
  Optimizer<double> opt(OptimizerKind::Sgd, h);
  TrainOptions o;
  o.epochs = 100;
  o.batch_size = 10;
  o.patience = 5;
  const auto r = fit(net, opt, ramp(10), ramp_labels(10), o);
  // First epoch sets the best; five more without improvement stop it.
  EXPECT_EQ(r.epochs_run, 6);
  EXPECT_TRUE(r.stopped_early);
}

TEST(Fit, DivergenceIsReported) {
  auto net = build_network(small(2), 1);
  Optimizer<double> opt(OptimizerKind::Adam);
  TrainOptions o;
  o.epochs = 3;
  o.batch_size = 2;
  o.patience = 0;
  Mat x = ramp(10);
  x(3, 1) = std::numeric_limits<double>::infinity();
  const auto r = fit(net, opt, x, ramp_labels(10), o);
  EXPECT_TRUE(r.diverged);
  EXPECT_TRUE(net.all_finite());  // the poisoned update is never applied
}

}  // namespace
}  // namespace evonas
