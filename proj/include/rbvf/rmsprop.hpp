#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "rbvf/param_store.hpp"

namespace rbvf {

/// Thrown when a step would write non-finite values into a ParamStore.
struct OptimizerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// RMSProp: acc <- rho*acc + (1-rho)*g^2; p <- p - lr*g/(sqrt(acc)+eps).
/// Grads are zeroed after a successful step. A non-finite gradient rejects
/// the step, leaving values and accumulators untouched.
class RmsProp {
 public:
  explicit RmsProp(double learning_rate, double rho = 0.99, double epsilon = 1e-8)
      : lr_(learning_rate), rho_(rho), eps_(epsilon) {
    if (lr_ <= 0) throw std::invalid_argument("learning_rate must be positive");
    if (rho_ <= 0 || rho_ >= 1) throw std::invalid_argument("rho must be in (0,1)");
    if (eps_ <= 0) throw std::invalid_argument("epsilon must be positive");
  }

  void step(ParamStore& store) {
    if (!store.grads_finite()) throw OptimizerError("rmsprop: non-finite gradient, step rejected");
    for (auto& [name, entry] : store) {
      auto it = acc_.find(name);
      if (it == acc_.end())
        it = acc_.emplace(name, Matrix::Zero(entry.values.rows(), entry.values.cols())).first;
      Matrix& acc = it->second;
      acc = rho_ * acc + (1.0 - rho_) * entry.grads.cwiseProduct(entry.grads);
      entry.values -= lr_ * entry.grads.cwiseQuotient((acc.cwiseSqrt().array() + eps_).matrix());
      entry.grads.setZero();
    }
    if (!store.values_finite())
      throw OptimizerError("rmsprop: step produced non-finite parameter values");
  }

  double learning_rate() const { return lr_; }
  const Matrix* accumulator(const std::string& name) const {
    auto it = acc_.find(name);
    return it == acc_.end() ? nullptr : &it->second;
  }

 private:
  double lr_, rho_, eps_;
  std::map<std::string, Matrix> acc_;
};

}  // namespace rbvf
