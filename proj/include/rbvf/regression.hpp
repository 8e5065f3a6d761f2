#pragma once

#include <cstdint>
#include <vector>

#include "rbvf/rbvf_model.hpp"

namespace rbvf {

/// r(a) = ||a||_2 * (sin a0 + sin a1) / 2.
double regression_target(const Vector& a);

struct RegressionTask {
  int sample_count = 500;
  int num_centroids = 20;
  double beta = 1.0;
  double domain_low = -3.0;
  double domain_high = 3.0;
  double test_fraction = 0.2;
  int train_steps = 2000;
  double learning_rate = 0.02;
  std::uint64_t seed = 0;
};

struct RegressionDataset {
  Matrix inputs;   // n x 2, uniform in the box
  Vector targets;  // exact target values
};

RegressionDataset generate_dataset(const RegressionTask& task);

struct RegressionFit {
  RbvfModelSpec model_spec;
  ParamStore params;
  std::vector<double> train_mse;  // one entry per optimizer step
  std::vector<double> test_mse;
  Eigen::Index train_count = 0;
};

/// Fits a state-free RBVF (constant dummy state, so centroids and values are
/// plain learnables) to the dataset by full-batch RMSProp on the MSE.
RegressionFit fit_regression(const RegressionTask& task);

/// Predictions of a fitted model at arbitrary query actions.
Vector predict(const RegressionFit& fit, const Matrix& queries);

}  // namespace rbvf
