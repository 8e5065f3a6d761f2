#include "rbvf/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace rbvf {

Mlp::Mlp(MlpSpec spec, std::string prefix) : spec_(std::move(spec)), prefix_(std::move(prefix)) {
  if (spec_.input_dim <= 0 || spec_.output_dim <= 0)
    throw std::invalid_argument("MlpSpec dims must be positive");
  for (int w : spec_.hidden)
    if (w <= 0) throw std::invalid_argument("MlpSpec hidden widths must be positive");
}

std::string Mlp::weight_name(int layer) const { return prefix_ + ".W" + std::to_string(layer); }
std::string Mlp::bias_name(int layer) const { return prefix_ + ".b" + std::to_string(layer); }

int Mlp::in_dim(int layer) const {
  return layer == 0 ? spec_.input_dim : spec_.hidden[layer - 1];
}

int Mlp::out_dim(int layer) const {
  return layer == spec_.layer_count() - 1 ? spec_.output_dim : spec_.hidden[layer];
}

Activation Mlp::activation(int layer) const {
  return layer == spec_.layer_count() - 1 ? spec_.output_activation : spec_.hidden_activation;
}

void Mlp::init_params(ParamStore& store, std::mt19937_64& rng) const {
  for (int l = 0; l < spec_.layer_count(); ++l) {
    const int fan_in = in_dim(l);
    const int fan_out = out_dim(l);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(fan_in, fan_out);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
    store.add(weight_name(l), std::move(w));
    store.add(bias_name(l), Matrix::Zero(1, fan_out));
  }
}

Matrix apply_activation(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::Identity: return z;
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Tanh: return z.array().tanh().matrix();
  }
  throw std::logic_error("unknown activation");
}

Matrix Mlp::forward(const ParamStore& store, const Matrix& x, MlpContext& ctx) const {
  if (x.cols() != spec_.input_dim)
    throw std::invalid_argument("Mlp::forward: input has " + std::to_string(x.cols()) +
                                " columns, spec expects " + std::to_string(spec_.input_dim));
  ctx.inputs.clear();
  ctx.outputs.clear();
  Matrix a = x;
  for (int l = 0; l < spec_.layer_count(); ++l) {
    ctx.inputs.push_back(a);
    Matrix z = a * store.values(weight_name(l));
    z.rowwise() += store.values(bias_name(l)).row(0);
    a = apply_activation(activation(l), z);
    ctx.outputs.push_back(a);
  }
  return a;
}

Matrix Mlp::forward(const ParamStore& store, const Matrix& x) const {
  MlpContext ctx;
  return forward(store, x, ctx);
}

Matrix Mlp::backward(ParamStore& store, const MlpContext& ctx, const Matrix& dy) const {
  if (ctx.outputs.empty()) throw std::logic_error("Mlp::backward without a recorded forward");
  Matrix da = dy;
  for (int l = spec_.layer_count() - 1; l >= 0; --l) {
    Matrix dz;
    switch (activation(l)) {
      case Activation::Identity:
        dz = da;
        break;
      case Activation::Relu:
        dz = (ctx.outputs[l].array() > 0.0).cast<double>().matrix().cwiseProduct(da);
        break;
      case Activation::Tanh:
        dz = (1.0 - ctx.outputs[l].array().square()).matrix().cwiseProduct(da);
        break;
    }
    store.grads(weight_name(l)).noalias() += ctx.inputs[l].transpose() * dz;
    store.grads(bias_name(l)).row(0) += dz.colwise().sum();
    da.noalias() = dz * store.values(weight_name(l)).transpose();
  }
  return da;
}

}  // namespace rbvf
