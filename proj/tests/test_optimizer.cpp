#include "evonas/optimizer.hpp"

#include <array>
#include <cmath>

#include <gtest/gtest.h>

namespace evonas {
namespace {

using Opt = Optimizer<double>;
using Arr = Opt::Array;

void step(Opt& opt, Arr& p, const Arr& g) {
  Opt::Map pm(p.data(), p.size());
  Opt::ConstMap gm(g.data(), g.size());
  opt.step(std::span<Opt::Map>(&pm, 1), std::span<const Opt::ConstMap>(&gm, 1));
}

Arr arr(std::initializer_list<double> v) {
  Arr a(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

// Reference values were produced by the Keras 3 optimizers on float64
// variables with default arguments. Keras keeps the learning rate and the
// initial accumulator as float32 and raises float32 betas to the step power
// for bias correction; the first two are replayed here, the third is covered
// by the Adam/Adamax tolerance (about 1e-8) and checked exactly below.

struct Trace {
  OptimizerKind kind;
  std::array<double, 3> expected;
  double tol;
};

TEST(Optimizer, MatchesReferenceTraces) {
  constexpr double kLr = 0.0010000000474974513;
  const Trace traces[] = {
      {OptimizerKind::Adadelta, {0.99999946622853886, -0.4999995806073757, 0.24999921003153147}, 1e-12},
      {OptimizerKind::Adagrad, {0.99954287934501518, -0.49950188088795489, 0.24931567075099292}, 1e-12},
      {OptimizerKind::Adam, {0.99810328393981351, -0.49836765676226158, 0.24829980085081013}, 3e-8},
      {OptimizerKind::Adamax, {0.99835022260763584, -0.49855818227917725, 0.24851797064198441}, 1e-9},
      {OptimizerKind::Ftrl, {0.46502039258497346, -0.34874620755351293, 0.2102722299862998}, 1e-10},
      // The reference keeps the Nadam momentum product in float32.
      {OptimizerKind::Nadam, {0.99925315998658626, -0.49931464515805324, 0.24913704384076979}, 1e-6},
      {OptimizerKind::RmsProp, {0.99826069765180792, -0.4984466591282069, 0.24784989108636676}, 1e-12},
  };
  for (const auto& tr : traces) {
    OptimizerHyper h = OptimizerHyper::defaults(tr.kind);
    h.learning_rate = kLr;
    h.initial_accumulator = f32(h.initial_accumulator);
    Opt opt(tr.kind, h);
    Arr p = arr({1.0, -0.5, 0.25});
    step(opt, p, arr({0.5, -1.0, 2.0}));
    step(opt, p, arr({0.1, 0.3, -0.7}));
    step(opt, p, arr({-0.4, 0.2, 0.05}));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], tr.expected[static_cast<std::size_t>(i)], tr.tol) << to_string(tr.kind) << " param " << i;
  }
}

// Same trace in plain float64 arithmetic, computed independently with NumPy.
TEST(Optimizer, AdamFamilyFloat64Trace) {
  const std::pair<OptimizerKind, std::array<double, 3>> cases[] = {
      {OptimizerKind::Adam, {0.9981032712933212, -0.4983676458781922, 0.24829978951649107}},
      {OptimizerKind::Adamax, {0.998350222223301, -0.49855818194248447, 0.24851797029701336}},
  };
  for (const auto& [kind, expected] : cases) {
    OptimizerHyper h;
    h.learning_rate = 0.0010000000474974513;
    Opt opt(kind, h);
    Arr p = arr({1.0, -0.5, 0.25});
    step(opt, p, arr({0.5, -1.0, 2.0}));
    step(opt, p, arr({0.1, 0.3, -0.7}));
    step(opt, p, arr({-0.4, 0.2, 0.05}));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], expected[static_cast<std::size_t>(i)], 1e-15) << to_string(kind);
  }
}

TEST(Optimizer, PlainSgdMatchesReferenceTrace) {
  OptimizerHyper h;
  h.learning_rate = 0.009999999776482582;
  h.momentum = 0.0;
  Opt opt(OptimizerKind::Sgd, h);
  Arr p = arr({1.0, -0.5, 0.25});
  step(opt, p, arr({0.5, -1.0, 2.0}));
  step(opt, p, arr({0.1, 0.3, -0.7}));
  step(opt, p, arr({-0.4, 0.2, 0.05}));
  EXPECT_NEAR(p[0], 0.99800000004470357, 1e-12);
  EXPECT_NEAR(p[1], -0.49500000011175871, 1e-12);
  EXPECT_NEAR(p[2], 0.2365000003017485, 1e-12);
}

TEST(Optimizer, SgdSingleStep) {
  OptimizerHyper h;
  h.learning_rate = 0.1;
  h.momentum = 0.0;
  Opt opt(OptimizerKind::Sgd, h);
  Arr p = arr({1.0});
  step(opt, p, arr({0.5}));
  EXPECT_DOUBLE_EQ(p[0], 0.95);
}

// VdW = beta VdW + (1 - beta) dW, W -= lr VdW, worked by hand.
TEST(Optimizer, MomentumHandTrace) {
  OptimizerHyper h;
  h.learning_rate = 0.01;
  h.momentum = 0.9;
  Opt opt(OptimizerKind::Sgd, h);
  Arr p = arr({1.0});
  step(opt, p, arr({0.5}));
  EXPECT_NEAR(opt.slot(0)[0], 0.05, 1e-15);
  EXPECT_NEAR(p[0], 0.9995, 1e-15);
  step(opt, p, arr({0.5}));
  EXPECT_NEAR(opt.slot(0)[0], 0.095, 1e-15);
  EXPECT_NEAR(p[0], 0.99855, 1e-15);
}

TEST(Optimizer, MomentumZeroIsPlainSgd) {
  OptimizerHyper h;
  h.learning_rate = 0.05;
  h.momentum = 0.0;
  Opt opt(OptimizerKind::Sgd, h);
  Arr p = arr({2.0, -1.0});
  const Arr g = arr({0.3, -0.2});
  for (int i = 0; i < 4; ++i) step(opt, p, g);
  EXPECT_NEAR(p[0], 2.0 - 4 * 0.05 * 0.3, 1e-15);
  EXPECT_NEAR(p[1], -1.0 + 4 * 0.05 * 0.2, 1e-15);
}

TEST(Optimizer, SgdGeneDefaults) {
  const auto h = OptimizerHyper::defaults(OptimizerKind::Sgd);
  EXPECT_DOUBLE_EQ(h.momentum, 0.9);
  EXPECT_DOUBLE_EQ(h.learning_rate, 0.01);
}

// f(w) = w^2 from w = 1 with default settings. Each Adam step moves w by at
// most about the learning rate, so 1000 steps of 0.001 cannot get near 0;
// the 1000-step value comes from a scalar NumPy replay.
TEST(Optimizer, AdamMinimisesQuadratic) {
  Opt opt(OptimizerKind::Adam);
  Arr w = arr({1.0});
  for (int i = 0; i < 1000; ++i) step(opt, w, 2.0 * w);
  EXPECT_NEAR(w[0], 0.2576650890790342, 1e-12);
  for (int i = 0; i < 2000; ++i) step(opt, w, 2.0 * w);
  EXPECT_LT(std::abs(w[0]), 1e-2) << "w=" << w[0];
}

TEST(Optimizer, EveryKindDecreasesQuadratic) {
  for (OptimizerKind kind : kAllOptimizers) {
    Opt opt(kind);
    Arr w = arr({1.0, -2.0});
    const double before = w.square().sum();
    for (int i = 0; i < 50; ++i) step(opt, w, 2.0 * w);
    EXPECT_LT(w.square().sum(), before) << to_string(kind);
  }
}

TEST(Optimizer, ShapeMismatchThrows) {
  Opt opt(OptimizerKind::Adam);
  Arr p = arr({1.0, 2.0});
  EXPECT_THROW(step(opt, p, arr({1.0})), std::invalid_argument);
}

TEST(OptimizerStep, KeepsDisabledBiasAtZero) {
  NetworkConfig c;
  c.input_dim = 2;
  c.nodes = 3;
  c.output_bias = false;
  auto net = build_network(c, 1);
  Gradients<double> g;
  for (const auto& l : net.layers) {
    g.weights.push_back(Eigen::MatrixXd::Ones(l.units(), l.fan_in()));
    g.bias.push_back(Eigen::VectorXd::Ones(l.units()));
  }
  Opt opt(OptimizerKind::Sgd);
  optimizer_step(net, g, opt);
  EXPECT_EQ(net.layers.back().bias[0], 0.0);
  EXPECT_NE(net.layers.front().bias[0], 0.0);
}

}  // namespace
}  // namespace evonas
