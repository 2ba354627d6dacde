#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "evonas/network.hpp"
#include "evonas/optimizer.hpp"
#include "evonas/random.hpp"

namespace evonas {

struct TrainOptions {
  int epochs = 1;
  int batch_size = 1;
  std::uint64_t seed = 0;
  /// Early stopping on the epoch training loss. patience <= 0 disables it.
  double min_delta = 1e-4;
  int patience = 5;
};

struct TrainReport {
  int epochs_run = 0;
  std::vector<double> epoch_loss;
  bool stopped_early = false;
  bool diverged = false;
  long updates = 0;
};

/// Mini-batch training on `features` (one sample per row). Sample order is
/// reshuffled every epoch; the last batch of an epoch may be short. A batch
/// size larger than the data trains full-batch. Training stops at the first
/// non-finite loss, gradient or parameter and reports `diverged`.
template <typename Scalar, typename DerivedX, typename DerivedY>
TrainReport fit(DenseNetwork<Scalar>& net, Optimizer<Scalar>& opt,
                const Eigen::MatrixBase<DerivedX>& features, const Eigen::MatrixBase<DerivedY>& labels,
                const TrainOptions& options) {
  TrainReport report;
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0 || options.epochs < 1) return report;
  const auto batch = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.batch_size, 1)), n);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(derive_seed(options.seed, 0x7a1));

  double best = std::numeric_limits<double>::infinity();
  int wait = 0;
  std::vector<Eigen::Index> idx;
  idx.reserve(batch);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle_in_place(std::span(order), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      idx.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                 order.begin() + static_cast<std::ptrdiff_t>(stop));
      const auto x = features(idx, Eigen::all);
      const Eigen::VectorXi y = labels(idx).template cast<int>();

      const ForwardCache<Scalar> cache = forward(net, x);
      const double loss = static_cast<double>(bce_loss(cache.predictions(), y));
      const Gradients<Scalar> grads = backprop(net, cache, y);
      if (!std::isfinite(loss) || !grads.all_finite()) {
        report.diverged = true;
        break;
      }
      optimizer_step(net, grads, opt);
      ++report.updates;
      if (!net.all_finite()) {
        report.diverged = true;
        break;
      }
      loss_sum += loss * static_cast<double>(stop - start);
    }
    if (report.diverged) break;

    const double epoch_loss = loss_sum / static_cast<double>(n);
    report.epoch_loss.push_back(epoch_loss);
    report.epochs_run = epoch + 1;

    if (options.patience > 0) {
      if (epoch_loss < best - options.min_delta) {
        best = epoch_loss;
        wait = 0;
      } else if (++wait >= options.patience) {
        report.stopped_early = epoch + 1 < options.epochs;
        break;
      }
    }
  }
  return report;
}

}  // namespace evonas
