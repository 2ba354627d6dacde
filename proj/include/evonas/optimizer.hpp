#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "evonas/network.hpp"
#include "evonas/types.hpp"

namespace evonas {

/// Optimizer hyperparameters. Only the fields relevant to the chosen kind are
/// read.
struct OptimizerHyper {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double rho = 0.9;
  double momentum = 0.0;
  double initial_accumulator = 0.1;
  double l1 = 0.0;
  double l2 = 0.0;
  double lr_power = -0.5;

  /// Library defaults per kind. The SGD gene uses the exponentially weighted
  /// momentum form with beta 0.9.
  static OptimizerHyper defaults(OptimizerKind kind) {
    OptimizerHyper h;
    switch (kind) {
      case OptimizerKind::Sgd:
        h.learning_rate = 0.01;
        h.momentum = 0.9;
        break;
      case OptimizerKind::RmsProp:
        h.rho = 0.9;
        break;
      case OptimizerKind::Adadelta:
        h.rho = 0.95;
        break;
      case OptimizerKind::Adagrad:
      case OptimizerKind::Adam:
      case OptimizerKind::Adamax:
      case OptimizerKind::Ftrl:
      case OptimizerKind::Nadam:
        break;
    }
    return h;
  }
};

/// Stateful first-order optimizer over a fixed list of parameter tensors.
/// Tensors are seen as flat arrays, so any Eigen dense storage works.
template <typename Scalar = double>
class Optimizer {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using Map = Eigen::Map<Array>;
  using ConstMap = Eigen::Map<const Array>;

  explicit Optimizer(OptimizerKind kind) : Optimizer(kind, OptimizerHyper::defaults(kind)) {}
  Optimizer(OptimizerKind kind, OptimizerHyper hyper) : kind_(kind), hyper_(hyper) {}

  OptimizerKind kind() const { return kind_; }
  const OptimizerHyper& hyper() const { return hyper_; }
  long steps() const { return t_; }

  /// First slot of tensor `i` (velocity, first moment or accumulator).
  const Array& slot(std::size_t i, std::size_t which = 0) const { return slots_.at(i)[which]; }

  /// One update. `params[i]` and `grads[i]` must keep the same sizes across
  /// calls.
  void step(std::span<Map> params, std::span<const ConstMap> grads) {
    if (params.size() != grads.size()) throw std::invalid_argument("params/grads count mismatch");
    if (slots_.empty()) init(params);
    if (slots_.size() != params.size()) throw std::invalid_argument("parameter list changed");
    ++t_;
    const Scalar lr = Scalar(hyper_.learning_rate);
    const Scalar b1 = Scalar(hyper_.beta1);
    const Scalar b2 = Scalar(hyper_.beta2);
    const Scalar eps = Scalar(hyper_.epsilon);
    const Scalar rho = Scalar(hyper_.rho);
    const double t = static_cast<double>(t_);

    // Nadam momentum schedule is shared by all tensors.
    Scalar nadam_u = 0, nadam_u_next = 0, nadam_prod = 0, nadam_prod_next = 0;
    if (kind_ == OptimizerKind::Nadam) {
      nadam_u = Scalar(hyper_.beta1 * (1.0 - 0.5 * std::pow(0.96, t)));
      nadam_u_next = Scalar(hyper_.beta1 * (1.0 - 0.5 * std::pow(0.96, t + 1.0)));
      mu_product_ *= nadam_u;
      nadam_prod = mu_product_;
      nadam_prod_next = mu_product_ * nadam_u_next;
    }

    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& p = params[i];
      const auto& g = grads[i];
      if (p.size() != g.size() || slots_[i][0].size() != p.size())
        throw std::invalid_argument("parameter/gradient shape mismatch");
      auto& s = slots_[i];
      switch (kind_) {
        case OptimizerKind::Sgd:
          s[0] = Scalar(hyper_.momentum) * s[0] + (Scalar(1) - Scalar(hyper_.momentum)) * g;
          p -= lr * s[0];
          break;
        case OptimizerKind::RmsProp:
          s[0] = rho * s[0] + (Scalar(1) - rho) * g.square();
          p -= lr * g / (s[0] + eps).sqrt();
          break;
        case OptimizerKind::Adagrad:
          s[0] += g.square();
          p -= lr * g / (s[0] + eps).sqrt();
          break;
        case OptimizerKind::Adadelta: {
          s[0] = rho * s[0] + (Scalar(1) - rho) * g.square();
          const Array delta = (s[1] + eps).sqrt() / (s[0] + eps).sqrt() * g;
          s[1] = rho * s[1] + (Scalar(1) - rho) * delta.square();
          p -= lr * delta;
          break;
        }
        case OptimizerKind::Adam: {
          s[0] = b1 * s[0] + (Scalar(1) - b1) * g;
          s[1] = b2 * s[1] + (Scalar(1) - b2) * g.square();
          const Scalar alpha = Scalar(hyper_.learning_rate * std::sqrt(1.0 - std::pow(hyper_.beta2, t)) /
                                      (1.0 - std::pow(hyper_.beta1, t)));
          p -= alpha * s[0] / (s[1].sqrt() + eps);
          break;
        }
        case OptimizerKind::Adamax: {
          s[0] = b1 * s[0] + (Scalar(1) - b1) * g;
          s[1] = (b2 * s[1]).max(g.abs());
          const Scalar alpha = Scalar(hyper_.learning_rate / (1.0 - std::pow(hyper_.beta1, t)));
          p -= alpha * s[0] / (s[1] + eps);
          break;
        }
        case OptimizerKind::Nadam: {
          s[0] = b1 * s[0] + (Scalar(1) - b1) * g;
          s[1] = b2 * s[1] + (Scalar(1) - b2) * g.square();
          const Array m_hat = nadam_u_next * s[0] / (Scalar(1) - nadam_prod_next) +
                              (Scalar(1) - nadam_u) * g / (Scalar(1) - nadam_prod);
          const Array v_hat = s[1] / Scalar(1.0 - std::pow(hyper_.beta2, t));
          p -= lr * m_hat / (v_hat.sqrt() + eps);
          break;
        }
        case OptimizerKind::Ftrl: {
          // s[0]: squared-gradient accumulator, s[1]: linear term.
          const Scalar power = Scalar(-hyper_.lr_power);
          const Array next = s[0] + g.square();
          s[1] += g - (next.pow(power) - s[0].pow(power)) / lr * p;
          const Array quadratic = next.pow(power) / lr + Scalar(2 * hyper_.l2);
          const Scalar l1 = Scalar(hyper_.l1);
          const Array clipped = s[1].max(-l1).min(l1);
          p = (clipped - s[1]) / quadratic;
          s[0] = next;
          break;
        }
      }
    }
  }

 private:
  void init(std::span<Map> params) {
    slots_.clear();
    for (const auto& p : params) {
      const Scalar fill = (kind_ == OptimizerKind::Adagrad || kind_ == OptimizerKind::Ftrl)
                              ? Scalar(hyper_.initial_accumulator)
                              : Scalar(0);
      slots_.push_back({Array::Constant(p.size(), fill), Array::Zero(p.size())});
    }
  }

  OptimizerKind kind_;
  OptimizerHyper hyper_;
  long t_ = 0;
  Scalar mu_product_ = Scalar(1);
  std::vector<std::array<Array, 2>> slots_;
};

/// Applies one optimizer update to every weight and bias of `net`. Layers
/// without a bias keep it at zero.
template <typename Scalar>
void optimizer_step(DenseNetwork<Scalar>& net, const Gradients<Scalar>& grads, Optimizer<Scalar>& opt) {
  using Map = typename Optimizer<Scalar>::Map;
  using ConstMap = typename Optimizer<Scalar>::ConstMap;
  std::vector<Map> params;
  std::vector<ConstMap> gs;
  params.reserve(net.layers.size() * 2);
  gs.reserve(net.layers.size() * 2);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& layer = net.layers[l];
    params.emplace_back(layer.weights.data(), layer.weights.size());
    gs.emplace_back(grads.weights[l].data(), grads.weights[l].size());
    params.emplace_back(layer.bias.data(), layer.bias.size());
    gs.emplace_back(grads.bias[l].data(), grads.bias[l].size());
  }
  opt.step(std::span<Map>(params), std::span<const ConstMap>(gs));
  for (auto& layer : net.layers)
    if (!layer.has_bias) layer.bias.setZero();
}

}  // namespace evonas
