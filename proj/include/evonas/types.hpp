#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evonas {

enum class Activation { Elu, Relu, Sigmoid, Softmax, Softplus, Softsign, Tanh, Selu };

enum class OptimizerKind { Adadelta, Adagrad, Adam, Adamax, Ftrl, Nadam, RmsProp, Sgd };

/// The seven activations in the default gene set. Selu is opt-in.
inline constexpr std::array<Activation, 7> kDefaultActivations{
    Activation::Elu,      Activation::Relu,     Activation::Sigmoid, Activation::Softmax,
    Activation::Softplus, Activation::Softsign, Activation::Tanh};

inline constexpr std::array<Activation, 8> kAllActivations{
    Activation::Elu,      Activation::Relu,     Activation::Sigmoid, Activation::Softmax,
    Activation::Softplus, Activation::Softsign, Activation::Tanh,    Activation::Selu};

inline constexpr std::array<OptimizerKind, 8> kAllOptimizers{
    OptimizerKind::Adadelta, OptimizerKind::Adagrad, OptimizerKind::Adam,
    OptimizerKind::Adamax,   OptimizerKind::Ftrl,    OptimizerKind::Nadam,
    OptimizerKind::RmsProp,  OptimizerKind::Sgd};

/// Lowercase canonical names ("relu", "rmsprop", ...).
std::string_view to_string(Activation a);
std::string_view to_string(OptimizerKind o);

/// Case-insensitive. Throws ParseError listing the valid names.
Activation parse_activation(std::string_view name);
OptimizerKind parse_optimizer(std::string_view name);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace evonas
