#include <doctest.h>

#include <random>

#include "rbvf/grad_check.hpp"
#include "rbvf/mlp.hpp"
#include "rbvf/rmsprop.hpp"

using namespace rbvf;

namespace {

Matrix row(std::initializer_list<double> vals) {
  Matrix m(1, static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double v : vals) m(0, i++) = v;
  return m;
}

}  // namespace

TEST_CASE("mlp with identity weights is the identity map") {
  MlpSpec spec{3, {}, 3, Activation::Relu, Activation::Identity};
  Mlp mlp(spec, "m");
  ParamStore store;
  store.add("m.W0", Matrix::Identity(3, 3));
  store.add("m.b0", Matrix::Zero(1, 3));
  const Matrix x = row({0.5, -1.25, 2.0});
  CHECK(mlp.forward(store, x) == x);
}

TEST_CASE("all-zero relu network maps everything to zero") {
  MlpSpec spec{2, {4}, 3, Activation::Relu, Activation::Identity};
  Mlp mlp(spec, "m");
  ParamStore store;
  store.add("m.W0", Matrix::Zero(2, 4));
  store.add("m.b0", Matrix::Zero(1, 4));
  store.add("m.W1", Matrix::Zero(4, 3));
  store.add("m.b1", Matrix::Zero(1, 3));
  CHECK(mlp.forward(store, row({3.0, -7.0})) == Matrix::Zero(1, 3));
}

TEST_CASE("hand-set 1->[2,relu]->1 matches manual evaluation") {
  MlpSpec spec{1, {2}, 1, Activation::Relu, Activation::Identity};
  Mlp mlp(spec, "m");
  ParamStore store;
  store.add("m.W0", row({2.0, -1.0}));  // 1x2
  Matrix b0(1, 2);
  b0 << 0.5, 0.25;
  store.add("m.b0", b0);
  Matrix w1(2, 1);
  w1 << 3.0, -2.0;
  store.add("m.W1", w1);
  store.add("m.b1", row({0.1}));
  // x=1: hidden pre-act (2.5, -0.75) -> relu (2.5, 0); out = 3*2.5 + 0.1 = 7.6
  CHECK(mlp.forward(store, row({1.0}))(0, 0) == doctest::Approx(7.6).epsilon(1e-12));
  // x=-1: hidden pre-act (-1.5, 1.25) -> relu (0, 1.25); out = -2*1.25 + 0.1 = -2.4
  CHECK(mlp.forward(store, row({-1.0}))(0, 0) == doctest::Approx(-2.4).epsilon(1e-12));
}

TEST_CASE("forward is pure: identical inputs give bitwise-identical outputs") {
  MlpSpec spec{3, {8, 8}, 2, Activation::Relu, Activation::Tanh};
  Mlp mlp(spec, "m");
  ParamStore store;
  std::mt19937_64 rng(7);
  mlp.init_params(store, rng);
  const Matrix x = row({0.3, -0.8, 1.7});
  const Matrix y1 = mlp.forward(store, x);
  const Matrix y2 = mlp.forward(store, x);
  CHECK(y1 == y2);
}

TEST_CASE("backward: constant loss and linear loss") {
  MlpSpec spec{1, {}, 1, Activation::Relu, Activation::Identity};
  Mlp mlp(spec, "m");
  ParamStore store;
  store.add("m.W0", row({3.0}));
  store.add("m.b0", row({0.0}));

  SUBCASE("loss independent of output leaves zero grads") {
    MlpContext ctx;
    mlp.forward(store, row({2.0}), ctx);
    mlp.backward(store, ctx, row({0.0}));
    CHECK(store.grads("m.W0")(0, 0) == 0.0);
    CHECK(store.grads("m.b0")(0, 0) == 0.0);
  }

  SUBCASE("loss = w*x with x=2 gives dloss/dw = 2") {
    MlpContext ctx;
    mlp.forward(store, row({2.0}), ctx);
    mlp.backward(store, ctx, row({1.0}));
    CHECK(store.grads("m.W0")(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  }

  SUBCASE("backward without a forward throws") {
    MlpContext ctx;
    CHECK_THROWS_AS(mlp.backward(store, ctx, row({1.0})), std::logic_error);
  }
}

TEST_CASE("mlp gradients match central finite differences over 100 random instances") {
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(trial));
    MlpSpec spec{3, {5, 4}, 2, Activation::Relu,
                 trial % 2 == 0 ? Activation::Identity : Activation::Tanh};
    Mlp mlp(spec, "m");
    ParamStore store;
    mlp.init_params(store, rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Randomize biases too: zero-initialized biases can park a relu exactly
    // on its kink, where finite differences and the subgradient disagree.
    for (const auto& name : store.names())
      for (Eigen::Index i = 0; i < store.values(name).size(); ++i)
        store.values(name)(i) += 0.1 * gauss(rng);
    Matrix x(1, 3);
    for (int j = 0; j < 3; ++j) x(0, j) = gauss(rng);

    auto loss = [&]() { return mlp.forward(store, x).array().square().sum(); };
    auto backward = [&]() {
      MlpContext ctx;
      const Matrix y = mlp.forward(store, x, ctx);
      mlp.backward(store, ctx, 2.0 * y);
    };
    CHECK(grad_check(store, loss, backward) <= 1e-4);
  }
}

TEST_CASE("grad_check on a linear model is near machine precision") {
  MlpSpec spec{2, {}, 1, Activation::Relu, Activation::Identity};
  Mlp mlp(spec, "m");
  ParamStore store;
  std::mt19937_64 rng(42);
  mlp.init_params(store, rng);
  const Matrix x = row({1.25, -0.75});
  auto loss = [&]() { return mlp.forward(store, x)(0, 0); };
  auto backward = [&]() {
    MlpContext ctx;
    mlp.forward(store, x, ctx);
    mlp.backward(store, ctx, Matrix::Ones(1, 1));
  };
  CHECK(grad_check(store, loss, backward) <= 1e-10);
}

TEST_CASE("missing parameter and dimension mismatch are errors") {
  MlpSpec spec{2, {}, 1, Activation::Relu, Activation::Identity};
  Mlp mlp(spec, "m");
  ParamStore store;
  CHECK_THROWS_AS(mlp.forward(store, row({1.0, 2.0})), std::out_of_range);
  store.add("m.W0", Matrix::Zero(2, 1));
  store.add("m.b0", Matrix::Zero(1, 1));
  CHECK_THROWS_AS(mlp.forward(store, row({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("rmsprop hand-computed single step") {
  ParamStore store;
  store.add("w", Matrix::Constant(1, 1, 1.0));
  store.grads("w")(0, 0) = 1.0;
  RmsProp opt(0.01, 0.9, 1e-8);
  opt.step(store);
  // acc' = 0.1, delta = -0.01/(sqrt(0.1)+1e-8)
  const double expected = 1.0 - 0.01 / (std::sqrt(0.1) + 1e-8);
  CHECK(store.values("w")(0, 0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK((*opt.accumulator("w"))(0, 0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(store.grads("w")(0, 0) == 0.0);
}

TEST_CASE("rmsprop with zero gradient leaves values unchanged, accumulator decays") {
  ParamStore store;
  store.add("w", Matrix::Constant(1, 1, 2.5));
  store.grads("w")(0, 0) = 1.0;
  RmsProp opt(0.01, 0.9, 1e-8);
  opt.step(store);  // builds acc = 0.1
  const double v_after_first = store.values("w")(0, 0);
  opt.step(store);  // zero grad
  CHECK(store.values("w")(0, 0) == v_after_first);
  CHECK((*opt.accumulator("w"))(0, 0) == doctest::Approx(0.09).epsilon(1e-14));
}

TEST_CASE("two successive identical gradients: second step is smaller") {
  ParamStore store;
  store.add("w", Matrix::Constant(1, 1, 0.0));
  RmsProp opt(0.01, 0.9, 1e-8);
  store.grads("w")(0, 0) = 1.0;
  opt.step(store);
  const double d1 = std::abs(store.values("w")(0, 0));
  const double before = store.values("w")(0, 0);
  store.grads("w")(0, 0) = 1.0;
  opt.step(store);
  const double d2 = std::abs(store.values("w")(0, 0) - before);
  CHECK(d2 < d1);
}

TEST_CASE("rmsprop rejects non-finite gradients without touching values") {
  ParamStore store;
  store.add("w", Matrix::Constant(1, 1, 1.0));
  store.grads("w")(0, 0) = std::numeric_limits<double>::quiet_NaN();
  RmsProp opt(0.01);
  CHECK_THROWS_AS(opt.step(store), OptimizerError);
  CHECK(store.values("w")(0, 0) == 1.0);
}
