#include "evonas/types.hpp"

#include <algorithm>
#include <cctype>

namespace evonas {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename Enum, std::size_t N>
Enum parse_named(std::string_view name, const std::array<Enum, N>& options, const char* what) {
  const std::string key = lower(name);
  for (Enum e : options)
    if (to_string(e) == key) return e;
  std::string valid;
  for (Enum e : options) {
    if (!valid.empty()) valid += ", ";
    valid += to_string(e);
  }
  throw ParseError("unknown " + std::string(what) + " '" + std::string(name) +
                   "' (valid: " + valid + ")");
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Elu: return "elu";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softmax: return "softmax";
    case Activation::Softplus: return "softplus";
    case Activation::Softsign: return "softsign";
    case Activation::Tanh: return "tanh";
    case Activation::Selu: return "selu";
  }
  return "?";
}

std::string_view to_string(OptimizerKind o) {
  switch (o) {
    case OptimizerKind::Adadelta: return "adadelta";
    case OptimizerKind::Adagrad: return "adagrad";
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::Adamax: return "adamax";
    case OptimizerKind::Ftrl: return "ftrl";
    case OptimizerKind::Nadam: return "nadam";
    case OptimizerKind::RmsProp: return "rmsprop";
    case OptimizerKind::Sgd: return "sgd";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  return parse_named(name, kAllActivations, "activation");
}

OptimizerKind parse_optimizer(std::string_view name) {
  return parse_named(name, kAllOptimizers, "optimizer");
}

}  // namespace evonas
