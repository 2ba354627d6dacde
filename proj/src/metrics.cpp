#include "evonas/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace evonas {

namespace {

void require_same_length(Eigen::Index a, Eigen::Index b) {
  if (a != b)
    throw std::invalid_argument("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  if (a == 0) throw std::invalid_argument("empty prediction vector");
}

}  // namespace

double Confusion::precision() const { return tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp); }

double Confusion::recall() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }

Confusion confusion(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth) {
  require_same_length(predicted.size(), truth.size());
  Confusion c;
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool t = truth[i] == 1;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f_measure(const Confusion& c) {
  // 2PR/(P+R) simplifies to 2tp/(2tp+fp+fn).
  const long denom = 2 * c.tp + c.fp + c.fn;
  return c.tp == 0 || denom == 0 ? 0.0 : 2.0 * double(c.tp) / double(denom);
}

double mae(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  require_same_length(predicted.size(), truth.size());
  return (predicted - truth).cwiseAbs().mean();
}

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
  require_same_length(predicted.size(), truth.size());
  return std::sqrt((predicted - truth).squaredNorm() / double(predicted.size()));
}

}  // namespace evonas
