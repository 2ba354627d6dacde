#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "evonas/types.hpp"

namespace evonas {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

inline constexpr double kSeluLambda = 1.0507009873554804934193349852946;
inline constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

template <typename Scalar>
Scalar stable_sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

}  // namespace detail

/// Applies `kind` to pre-activations laid out one sample per column. Softmax
/// normalizes each column; every other kind is element-wise.
template <typename Derived>
MatrixX<typename Derived::Scalar> activate(Activation kind, const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  switch (kind) {
    case Activation::Elu:
      return z.unaryExpr([](Scalar v) { return v > Scalar(0) ? v : std::expm1(v); });
    case Activation::Selu:
      return z.unaryExpr([](Scalar v) {
        return Scalar(detail::kSeluLambda) *
               (v > Scalar(0) ? v : Scalar(detail::kSeluAlpha) * std::expm1(v));
      });
    case Activation::Relu:
      return z.cwiseMax(Scalar(0));
    case Activation::Sigmoid:
      return z.unaryExpr([](Scalar v) { return detail::stable_sigmoid(v); });
    case Activation::Softplus:
      return z.unaryExpr([](Scalar v) {
        return std::log1p(std::exp(-std::abs(v))) + std::max(v, Scalar(0));
      });
    case Activation::Softsign:
      return z.unaryExpr([](Scalar v) { return v / (Scalar(1) + std::abs(v)); });
    case Activation::Tanh:
      return z.array().tanh().matrix();
    case Activation::Softmax: {
      MatrixX<Scalar> out = (z.rowwise() - z.colwise().maxCoeff()).array().exp().matrix();
      out.array().rowwise() /= out.colwise().sum().array();
      return out;
    }
  }
  return z;
}

/// Element-wise derivative f'(z) for every kind except Softmax, whose
/// derivative is a per-sample Jacobian (see softmax_jacobian). `a` must be
/// activate(kind, z). ReLU at exactly 0 has derivative 0.
template <typename Scalar>
MatrixX<Scalar> activation_derivative(Activation kind, const MatrixX<Scalar>& z,
                                      const MatrixX<Scalar>& a) {
  switch (kind) {
    case Activation::Elu:
      return z.binaryExpr(a, [](Scalar v, Scalar av) { return v > Scalar(0) ? Scalar(1) : av + Scalar(1); });
    case Activation::Selu:
      return z.unaryExpr([](Scalar v) {
        return v > Scalar(0) ? Scalar(detail::kSeluLambda)
                             : Scalar(detail::kSeluLambda * detail::kSeluAlpha) * std::exp(v);
      });
    case Activation::Relu:
      return z.unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(0); });
    case Activation::Sigmoid:
      return (a.array() * (Scalar(1) - a.array())).matrix();
    case Activation::Softplus:
      return z.unaryExpr([](Scalar v) { return detail::stable_sigmoid(v); });
    case Activation::Softsign:
      return z.unaryExpr([](Scalar v) {
        const Scalar d = Scalar(1) + std::abs(v);
        return Scalar(1) / (d * d);
      });
    case Activation::Tanh:
      return (Scalar(1) - a.array().square()).matrix();
    case Activation::Softmax:
      break;
  }
  throw std::invalid_argument("softmax has no element-wise derivative; use softmax_jacobian");
}

/// d softmax / d z for one sample: diag(a) - a a^T.
template <typename Scalar>
MatrixX<Scalar> softmax_jacobian(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& a) {
  MatrixX<Scalar> jac = -a * a.transpose();
  jac.diagonal() += a;
  return jac;
}

/// Pulls an upstream gradient dL/da back to dL/dz.
template <typename Scalar>
MatrixX<Scalar> activation_backward(Activation kind, const MatrixX<Scalar>& z,
                                    const MatrixX<Scalar>& a, const MatrixX<Scalar>& grad_a) {
  if (kind == Activation::Softmax) {
    // J^T g = a * (g - <a, g>) column by column; J is symmetric.
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dots = (a.array() * grad_a.array()).colwise().sum();
    return (a.array() * (grad_a.array().rowwise() - dots.array())).matrix();
  }
  return grad_a.cwiseProduct(activation_derivative(kind, z, a));
}

}  // namespace evonas
