#pragma once

#include <random>
#include <string>
#include <vector>

#include "rbvf/param_store.hpp"

namespace rbvf {

enum class Activation { Identity, Relu, Tanh };

/// Shape of a fully connected network. Hidden list may be empty (pure linear map).
struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;
  Activation hidden_activation = Activation::Relu;
  Activation output_activation = Activation::Identity;

  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
};

/// Cached activations from one forward pass, consumed by backward().
struct MlpContext {
  std::vector<Matrix> inputs;   // input to each layer, batch rows
  std::vector<Matrix> outputs;  // post-activation output of each layer
};

/// Dense MLP over a named slice of a ParamStore. Weight matrices are
/// (in x out); biases are 1 x out row vectors broadcast over the batch.
class Mlp {
 public:
  Mlp(MlpSpec spec, std::string prefix);

  /// Registers uniformly initialized weights (+/- sqrt(6/(fan_in+fan_out)))
  /// and zero biases into the store.
  void init_params(ParamStore& store, std::mt19937_64& rng) const;

  /// X is batch x input_dim. Returns batch x output_dim.
  Matrix forward(const ParamStore& store, const Matrix& x, MlpContext& ctx) const;
  Matrix forward(const ParamStore& store, const Matrix& x) const;

  /// dY is batch x output_dim. Accumulates parameter grads, returns dX.
  Matrix backward(ParamStore& store, const MlpContext& ctx, const Matrix& dy) const;

  const MlpSpec& spec() const { return spec_; }
  std::string weight_name(int layer) const;
  std::string bias_name(int layer) const;

 private:
  int in_dim(int layer) const;
  int out_dim(int layer) const;
  Activation activation(int layer) const;

  MlpSpec spec_;
  std::string prefix_;
};

Matrix apply_activation(Activation act, const Matrix& z);

}  // namespace rbvf
