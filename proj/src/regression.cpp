#include "rbvf/regression.hpp"

#include <cmath>
#include <random>

#include "rbvf/rmsprop.hpp"

namespace rbvf {

double regression_target(const Vector& a) {
  return a.norm() * (std::sin(a(0)) + std::sin(a(1))) / 2.0;
}

RegressionDataset generate_dataset(const RegressionTask& task) {
  std::mt19937_64 rng(task.seed);
  std::uniform_real_distribution<double> u(task.domain_low, task.domain_high);
  RegressionDataset data;
  data.inputs.resize(task.sample_count, 2);
  data.targets.resize(task.sample_count);
  for (int i = 0; i < task.sample_count; ++i) {
    data.inputs(i, 0) = u(rng);
    data.inputs(i, 1) = u(rng);
    data.targets(i) = regression_target(data.inputs.row(i).transpose());
  }
  return data;
}

RegressionFit fit_regression(const RegressionTask& task) {
  const RegressionDataset data = generate_dataset(task);
  const Eigen::Index n = data.inputs.rows();
  const Eigen::Index n_test = static_cast<Eigen::Index>(std::lround(task.test_fraction * n));
  const Eigen::Index n_train = n - n_test;

  RegressionFit fit;
  fit.train_count = n_train;
  fit.model_spec.state_dim = 1;
  fit.model_spec.action_dim = 2;
  fit.model_spec.num_centroids = task.num_centroids;
  fit.model_spec.beta = task.beta;
  fit.model_spec.action_low = Vector::Constant(2, task.domain_low);
  fit.model_spec.action_high = Vector::Constant(2, task.domain_high);
  // No hidden layers: with the dummy state fixed at 0, the biases are the
  // free centroid locations (pre-squash) and values.
  RbvfNetwork net(fit.model_spec);

  std::mt19937_64 rng(task.seed + 1);
  net.init_params(fit.params, rng);
  // Zero-initialized biases put every centroid at the domain midpoint, a
  // symmetric fixed point of the loss (uniform weights, equal value grads,
  // zero centroid grads). Random biases break the tie.
  std::normal_distribution<double> gauss(0.0, 0.5);
  for (const auto& name : fit.params.names())
    for (Eigen::Index i = 0; i < fit.params.values(name).size(); ++i)
      fit.params.values(name)(i) += gauss(rng);

  const Matrix train_x = data.inputs.topRows(n_train);
  const Vector train_y = data.targets.head(n_train);
  const Matrix test_x = data.inputs.bottomRows(n_test);
  const Vector test_y = data.targets.tail(n_test);
  const Matrix train_s = Matrix::Zero(n_train, 1);
  const Matrix test_s = Matrix::Zero(n_test, 1);

  RmsProp opt(task.learning_rate);
  for (int step = 0; step < task.train_steps; ++step) {
    RbvfContext ctx;
    const Vector q = net.forward(fit.params, train_s, train_x, ctx);
    const Vector resid = q - train_y;
    const double mse = resid.squaredNorm() / static_cast<double>(n_train);
    fit.train_mse.push_back(mse);
    if (!std::isfinite(mse)) throw OptimizerError("fit_regression: diverged (non-finite loss)");
    const Vector dq = 2.0 / static_cast<double>(n_train) * resid;
    net.backward(fit.params, ctx, dq);
    opt.step(fit.params);

    if (n_test > 0) {
      RbvfContext tctx;
      const Vector tq = net.forward(fit.params, test_s, test_x, tctx);
      fit.test_mse.push_back((tq - test_y).squaredNorm() / static_cast<double>(n_test));
    }
  }
  return fit;
}

Vector predict(const RegressionFit& fit, const Matrix& queries) {
  RbvfNetwork net(fit.model_spec);
  RbvfContext ctx;
  return net.forward(fit.params, Matrix::Zero(queries.rows(), 1), queries, ctx);
}

}  // namespace rbvf
