#pragma once

#include <Eigen/Dense>

namespace evonas {

/// Counts with class 1 as the positive class.
struct Confusion {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
  double precision() const;
  double recall() const;
};

Confusion confusion(const Eigen::VectorXi& predicted, const Eigen::VectorXi& truth);

/// Harmonic mean of precision and recall; 0 when both are 0 or undefined.
double f_measure(const Confusion& c);

double mae(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);
double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

}  // namespace evonas
