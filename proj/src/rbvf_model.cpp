#include "rbvf/rbvf_model.hpp"

#include <cmath>
#include <stdexcept>

namespace rbvf {

void RbvfModelSpec::validate() const {
  if (state_dim <= 0 || action_dim <= 0 || num_centroids <= 0)
    throw std::invalid_argument("RbvfModelSpec: dims and N must be positive");
  if (beta < 0 || !std::isfinite(beta))
    throw std::invalid_argument("RbvfModelSpec: beta must be finite and >= 0");
  if (action_low.size() != action_dim || action_high.size() != action_dim)
    throw std::invalid_argument("RbvfModelSpec: action box size mismatch");
  for (int j = 0; j < action_dim; ++j)
    if (!(action_low(j) < action_high(j)))
      throw std::invalid_argument("RbvfModelSpec: action_low must be < action_high elementwise");
}

MlpSpec RbvfModelSpec::value_net_spec() const {
  MlpSpec s;
  s.input_dim = state_dim;
  s.hidden = value_hidden;
  s.output_dim = num_centroids;
  s.hidden_activation = Activation::Relu;
  s.output_activation = Activation::Identity;
  return s;
}

MlpSpec RbvfModelSpec::centroid_net_spec() const {
  MlpSpec s;
  s.input_dim = state_dim;
  s.hidden = centroid_hidden;
  s.output_dim = num_centroids * action_dim;
  s.hidden_activation = Activation::Relu;
  s.output_activation = Activation::Tanh;
  return s;
}

RbvfNetwork::RbvfNetwork(RbvfModelSpec spec, std::string prefix)
    : spec_(std::move(spec)),
      value_net_(spec_.value_net_spec(), prefix + ".value"),
      centroid_net_(spec_.centroid_net_spec(), prefix + ".centroid") {
  spec_.validate();
}

void RbvfNetwork::init_params(ParamStore& store, std::mt19937_64& rng) const {
  value_net_.init_params(store, rng);
  centroid_net_.init_params(store, rng);
}

Matrix RbvfNetwork::squash(const Matrix& tanh_out) const {
  const int d = spec_.action_dim;
  Matrix c = tanh_out;
  for (Eigen::Index col = 0; col < c.cols(); ++col) {
    const int j = static_cast<int>(col) % d;
    const double half = 0.5 * (spec_.action_high(j) - spec_.action_low(j));
    const double mid = 0.5 * (spec_.action_high(j) + spec_.action_low(j));
    c.col(col) = (c.col(col).array() * half + mid).matrix();
  }
  return c;
}

Vector RbvfNetwork::forward(const ParamStore& store, const Matrix& states, const Matrix& actions,
                            RbvfContext& ctx) const {
  if (!actions.allFinite()) throw std::invalid_argument("rbvf forward: non-finite action");
  const Eigen::Index b = states.rows();
  const int n = spec_.num_centroids;
  const int d = spec_.action_dim;

  ctx.actions = actions;
  ctx.values = value_net_.forward(store, states, ctx.value_ctx);
  ctx.tanh_out = centroid_net_.forward(store, states, ctx.centroid_ctx);
  const Matrix centroids = squash(ctx.tanh_out);

  ctx.dists.resize(b, n);
  for (Eigen::Index r = 0; r < b; ++r)
    for (int i = 0; i < n; ++i)
      ctx.dists(r, i) = (actions.row(r) - centroids.block(r, i * d, 1, d)).norm();

  ctx.weights.resize(b, n);
  ctx.q.resize(b);
  for (Eigen::Index r = 0; r < b; ++r) {
    Eigen::ArrayXd logits = -spec_.beta * ctx.dists.row(r).transpose().array();
    Eigen::ArrayXd w = (logits - logits.maxCoeff()).exp();
    w /= w.sum();
    ctx.weights.row(r) = w.transpose();
    ctx.q(r) = (w * ctx.values.row(r).transpose().array()).sum();
  }
  return ctx.q;
}

double RbvfNetwork::forward_one(const ParamStore& store, const Vector& s, const Vector& a) const {
  RbvfContext ctx;
  return forward(store, s.transpose(), a.transpose(), ctx)(0);
}

Matrix RbvfNetwork::backward(ParamStore& store, const RbvfContext& ctx, const Vector& dq) const {
  const Eigen::Index b = ctx.actions.rows();
  const int n = spec_.num_centroids;
  const int d = spec_.action_dim;
  const Matrix centroids = squash(ctx.tanh_out);

  Matrix dvalues(b, n);
  Matrix dtanh = Matrix::Zero(b, n * d);
  Matrix dactions = Matrix::Zero(b, d);

  for (Eigen::Index r = 0; r < b; ++r) {
    for (int i = 0; i < n; ++i) {
      const double w = ctx.weights(r, i);
      dvalues(r, i) = dq(r) * w;
      // d q / d dist_i through the softmax of logits -beta*dist
      const double ddist = dq(r) * w * (ctx.values(r, i) - ctx.q(r)) * (-spec_.beta);
      const double denom = std::max(ctx.dists(r, i), 1e-8);
      for (int j = 0; j < d; ++j) {
        const double u = (ctx.actions(r, j) - centroids(r, i * d + j)) / denom;
        dactions(r, j) += ddist * u;
        const double half = 0.5 * (spec_.action_high(j) - spec_.action_low(j));
        dtanh(r, i * d + j) += -ddist * u * half;
      }
    }
  }

  value_net_.backward(store, ctx.value_ctx, dvalues);
  centroid_net_.backward(store, ctx.centroid_ctx, dtanh);
  return dactions;
}

CentroidReadout RbvfNetwork::readout(const ParamStore& store, const Vector& s) const {
  const int n = spec_.num_centroids;
  const int d = spec_.action_dim;
  CentroidReadout out;
  out.values = value_net_.forward(store, s.transpose()).row(0).transpose();
  const Matrix c = squash(centroid_net_.forward(store, s.transpose()));
  out.locations.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out.locations(i, j) = c(0, i * d + j);
  return out;
}

MaxResult RbvfNetwork::max_over_centroids(const ParamStore& store, const Vector& s) const {
  const CentroidReadout r = readout(store, s);
  MaxResult out;
  out.best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec_.num_centroids; ++i) {
    const Vector a = r.locations.row(i).transpose();
    const double q = rbf_value(r.locations, r.values, a, spec_.beta);
    if (q > out.best_value) {
      out.best_value = q;
      out.best_action = a;
      out.best_index = i;
    }
  }
  return out;
}

Vector RbvfNetwork::max_over_centroids_batch(const ParamStore& store, const Matrix& states) const {
  const Eigen::Index b = states.rows();
  const int n = spec_.num_centroids;
  const int d = spec_.action_dim;
  const Matrix values = value_net_.forward(store, states);
  const Matrix centroids = squash(centroid_net_.forward(store, states));

  Vector out(b);
  Vector logits(n);
  for (Eigen::Index r = 0; r < b; ++r) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int z = 0; z < n; ++z) {
        double d2 = 0.0;
        for (int j = 0; j < d; ++j) {
          const double diff = centroids(r, i * d + j) - centroids(r, z * d + j);
          d2 += diff * diff;
        }
        logits(z) = -spec_.beta * std::sqrt(d2);
      }
      Eigen::ArrayXd w = (logits.array() - logits.maxCoeff()).exp();
      const double q = (w * values.row(r).transpose().array()).sum() / w.sum();
      if (q > best) best = q;
    }
    out(r) = best;
  }
  return out;
}

double RbvfNetwork::grid_max_oracle(const ParamStore& store, const Vector& s,
                                    int resolution) const {
  if (spec_.action_dim > 3)
    throw std::invalid_argument("grid_max_oracle: action_dim > 3 not supported");
  const CentroidReadout r = readout(store, s);
  FrozenReadout frozen{r.locations, r.values};
  return grid_max(frozen, spec_.beta, spec_.action_low, spec_.action_high, resolution).max_value;
}

}  // namespace rbvf
