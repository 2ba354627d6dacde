#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evonas/activation.hpp"
#include "evonas/random.hpp"
#include "evonas/types.hpp"

namespace evonas {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Decoded phenotype description: everything needed to build and train a
/// network except the data.
struct NetworkConfig {
  int hidden_layers = 1;
  int nodes = 16;
  Activation input_activation = Activation::Relu;
  Activation hidden_activation = Activation::Relu;
  Activation output_activation = Activation::Sigmoid;
  OptimizerKind optimizer = OptimizerKind::Adam;
  int epochs = 50;
  int batch_size = 4;
  int input_dim = 1;
  bool output_bias = true;

  /// Structural checks only; gene bounds are enforced by GeneSpace.
  void validate() const {
    if (hidden_layers < 0) throw std::invalid_argument("hidden_layers must be >= 0");
    if (nodes < 1) throw std::invalid_argument("nodes per layer must be >= 1");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (input_dim < 1) throw std::invalid_argument("input dimension must be >= 1");
  }

  bool operator==(const NetworkConfig&) const = default;
};

template <typename Scalar>
struct DenseLayer {
  MatrixX<Scalar> weights;  // [units x fan_in]
  VectorX<Scalar> bias;     // [units]
  Activation activation = Activation::Relu;
  bool has_bias = true;

  Eigen::Index units() const { return weights.rows(); }
  Eigen::Index fan_in() const { return weights.cols(); }
};

/// Fully connected feed-forward network with one output unit.
template <typename Scalar = double>
struct DenseNetwork {
  NetworkConfig config;
  std::vector<DenseLayer<Scalar>> layers;

  /// [s, N, N (x H), 1]
  std::vector<Eigen::Index> layer_sizes() const {
    std::vector<Eigen::Index> sizes{config.input_dim};
    for (const auto& l : layers) sizes.push_back(l.units());
    return sizes;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.weights.size() + l.bias.size());
    return n;
  }

  bool all_finite() const {
    for (const auto& l : layers)
      if (!l.weights.allFinite() || !l.bias.allFinite()) return false;
    return true;
  }
};

/// Input-processing layer (N units, F_I), H hidden layers (N units, F_H) and
/// one output unit (F_O). Glorot-uniform weights and zero biases, drawn from
/// `seed`.
template <typename Scalar = double>
DenseNetwork<Scalar> build_network(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  DenseNetwork<Scalar> net;
  net.config = config;
  Rng rng(derive_seed(seed, 0x1417));

  auto add = [&](Eigen::Index units, Eigen::Index fan_in, Activation act, bool bias) {
    DenseLayer<Scalar> layer;
    layer.activation = act;
    layer.has_bias = bias;
    const double limit = std::sqrt(6.0 / static_cast<double>(units + fan_in));
    layer.weights.resize(units, fan_in);
    // Row-major fill so the draw order matches the serialized layout.
    for (Eigen::Index r = 0; r < units; ++r)
      for (Eigen::Index c = 0; c < fan_in; ++c)
        layer.weights(r, c) = static_cast<Scalar>(limit * (2.0 * uniform_real(rng) - 1.0));
    layer.bias = VectorX<Scalar>::Zero(units);
    net.layers.push_back(std::move(layer));
  };

  add(config.nodes, config.input_dim, config.input_activation, true);
  for (int h = 0; h < config.hidden_layers; ++h)
    add(config.nodes, config.nodes, config.hidden_activation, true);
  add(1, config.nodes, config.output_activation, config.output_bias);
  return net;
}

/// Per-layer values kept for the backward pass. Samples are columns.
template <typename Scalar>
struct ForwardCache {
  MatrixX<Scalar> input;              // [s x B]
  std::vector<MatrixX<Scalar>> z;     // pre-activations per layer
  std::vector<MatrixX<Scalar>> a;     // activations per layer

  VectorX<Scalar> predictions() const { return a.back().row(0).transpose(); }
};

/// Forward pass on a batch laid out one sample per row ([B x s]).
template <typename Scalar, typename Derived>
ForwardCache<Scalar> forward(const DenseNetwork<Scalar>& net, const Eigen::MatrixBase<Derived>& batch) {
  if (batch.cols() != net.config.input_dim)
    throw std::invalid_argument("batch has " + std::to_string(batch.cols()) +
                                " columns, network expects " + std::to_string(net.config.input_dim));
  ForwardCache<Scalar> cache;
  cache.input = batch.transpose().template cast<Scalar>();
  cache.z.reserve(net.layers.size());
  cache.a.reserve(net.layers.size());
  const MatrixX<Scalar>* x = &cache.input;
  for (const auto& layer : net.layers) {
    MatrixX<Scalar> z = layer.weights * *x;
    if (layer.has_bias) z.colwise() += layer.bias;
    cache.a.push_back(activate(layer.activation, z));
    cache.z.push_back(std::move(z));
    x = &cache.a.back();
  }
  return cache;
}

template <typename Scalar, typename Derived>
VectorX<Scalar> predict_raw(const DenseNetwork<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  return forward(net, x).predictions();
}

/// Output >= 0.5 maps to 1, anything else (including NaN) to 0.
template <typename Scalar, typename Derived>
Eigen::VectorXi predict_binary(const DenseNetwork<Scalar>& net, const Eigen::MatrixBase<Derived>& x) {
  const VectorX<Scalar> raw = predict_raw(net, x);
  return raw.unaryExpr([](Scalar v) { return v >= Scalar(0.5) ? 1 : 0; });
}

inline constexpr double kBceEpsilon = 1e-7;

/// Mean binary cross-entropy with predictions clamped to [eps, 1 - eps].
template <typename Scalar, typename DerivedY>
Scalar bce_loss(const VectorX<Scalar>& y_hat, const Eigen::MatrixBase<DerivedY>& y) {
  const Scalar eps = Scalar(kBceEpsilon);
  Scalar total = 0;
  for (Eigen::Index i = 0; i < y_hat.size(); ++i) {
    const Scalar p = std::clamp(y_hat[i], eps, Scalar(1) - eps);
    const Scalar t = static_cast<Scalar>(y[i]);
    total -= t * std::log(p) + (Scalar(1) - t) * std::log(Scalar(1) - p);
  }
  return total / static_cast<Scalar>(y_hat.size());
}

template <typename Scalar>
struct Gradients {
  std::vector<MatrixX<Scalar>> weights;
  std::vector<VectorX<Scalar>> bias;

  bool all_finite() const {
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (!weights[i].allFinite() || !bias[i].allFinite()) return false;
    return true;
  }
};

/// Gradient of bce_loss with respect to every weight and bias. Where the
/// clamp is active the loss is flat and the gradient is zero.
template <typename Scalar, typename DerivedY>
Gradients<Scalar> backprop(const DenseNetwork<Scalar>& net, const ForwardCache<Scalar>& cache,
                           const Eigen::MatrixBase<DerivedY>& y) {
  const auto layer_count = net.layers.size();
  if (cache.a.size() != layer_count || cache.a.back().cols() != y.size())
    throw std::invalid_argument("forward cache does not match the network or labels");

  const Eigen::Index batch = y.size();
  const Scalar inv_batch = Scalar(1) / static_cast<Scalar>(batch);
  const Scalar eps = Scalar(kBceEpsilon);
  const auto& out = net.layers.back();
  const MatrixX<Scalar>& y_hat = cache.a.back();

  MatrixX<Scalar> delta(1, batch);
  if (out.activation == Activation::Sigmoid) {
    for (Eigen::Index i = 0; i < batch; ++i) {
      const Scalar p = y_hat(0, i);
      delta(0, i) = (p > eps && p < Scalar(1) - eps) ? (p - static_cast<Scalar>(y[i])) * inv_batch
                                                     : Scalar(0);
    }
  } else {
    MatrixX<Scalar> grad_a(1, batch);
    for (Eigen::Index i = 0; i < batch; ++i) {
      const Scalar p = y_hat(0, i);
      const Scalar t = static_cast<Scalar>(y[i]);
      grad_a(0, i) = (p > eps && p < Scalar(1) - eps) ? (p - t) / (p * (Scalar(1) - p)) * inv_batch
                                                      : Scalar(0);
    }
    delta = activation_backward(out.activation, cache.z.back(), y_hat, grad_a);
  }

  Gradients<Scalar> grads;
  grads.weights.resize(layer_count);
  grads.bias.resize(layer_count);
  for (std::size_t l = layer_count; l-- > 0;) {
    const MatrixX<Scalar>& x = l == 0 ? cache.input : cache.a[l - 1];
    grads.weights[l].noalias() = delta * x.transpose();
    if (net.layers[l].has_bias)
      grads.bias[l] = delta.rowwise().sum();
    else
      grads.bias[l] = VectorX<Scalar>::Zero(net.layers[l].units());
    if (l > 0) {
      MatrixX<Scalar> grad_a = net.layers[l].weights.transpose() * delta;
      delta = activation_backward(net.layers[l - 1].activation, cache.z[l - 1], cache.a[l - 1], grad_a);
    }
  }
  return grads;
}

/// Proportional error split across the weights feeding one output: each
/// incoming neuron j receives sum_k w_kj / (sum_i w_ki) * O_k. This is the
/// textbook picture of backpropagation; training uses the exact chain rule
/// in backprop(). `weights` is [outputs x inputs].
template <typename Scalar>
VectorX<Scalar> proportional_error_split(const MatrixX<Scalar>& weights,
                                         const VectorX<Scalar>& output_error) {
  if (weights.rows() != output_error.size())
    throw std::invalid_argument("one output error per weight row required");
  const VectorX<Scalar> row_sums = weights.rowwise().sum();
  VectorX<Scalar> err = VectorX<Scalar>::Zero(weights.cols());
  for (Eigen::Index k = 0; k < weights.rows(); ++k)
    err += (weights.row(k).transpose() / row_sums[k]) * output_error[k];
  return err;
}

}  // namespace evonas
