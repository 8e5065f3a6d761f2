#pragma once

#include <random>
#include <string>

#include "rbvf/mlp.hpp"
#include "rbvf/param_store.hpp"
#include "rbvf/rbf_layer.hpp"

namespace rbvf {

/// Architecture of a deep radial-basis value function: a centroid-location
/// trunk emitting N action-space anchors per state (tanh-squashed into the
/// action box) and a value trunk emitting the N centroid values.
struct RbvfModelSpec {
  int state_dim = 0;
  int action_dim = 0;
  int num_centroids = 0;
  double beta = 1.0;
  std::vector<int> value_hidden;     // widths of value-trunk hidden layers
  std::vector<int> centroid_hidden;  // widths of centroid-trunk hidden layers
  Vector action_low;
  Vector action_high;

  void validate() const;
  MlpSpec value_net_spec() const;
  MlpSpec centroid_net_spec() const;
};

struct CentroidReadout {
  Matrix locations;  // N x d, inside the action box
  Vector values;     // N, raw centroid values
  Vector weights(const Vector& a, double beta) const { return rbf_weights(locations, a, beta); }
};

struct MaxResult {
  double best_value = 0.0;
  Vector best_action;
  int best_index = 0;
};

/// Forward/backward context for a batch of (state, action) queries.
struct RbvfContext {
  MlpContext value_ctx;
  MlpContext centroid_ctx;
  Matrix actions;        // B x d
  Matrix values;         // B x N
  Matrix tanh_out;       // B x (N*d), centroid net output after tanh
  Matrix weights;        // B x N
  Matrix dists;          // B x N
  Vector q;              // B
};

class RbvfNetwork {
 public:
  RbvfNetwork(RbvfModelSpec spec, std::string prefix = "q");

  void init_params(ParamStore& store, std::mt19937_64& rng) const;

  /// Q_beta(s,a) for a batch: states B x state_dim, actions B x action_dim.
  Vector forward(const ParamStore& store, const Matrix& states, const Matrix& actions,
                 RbvfContext& ctx) const;
  double forward_one(const ParamStore& store, const Vector& s, const Vector& a) const;

  /// Accumulates d(loss)/d(params) given dq = d(loss)/dQ per batch row.
  /// Returns d(loss)/d(actions) (B x d).
  Matrix backward(ParamStore& store, const RbvfContext& ctx, const Vector& dq) const;

  /// All N centroid locations (box-constrained) and raw values at state s.
  CentroidReadout readout(const ParamStore& store, const Vector& s) const;

  /// max_i Q_beta(s, a_i(s)): the interpolant evaluated at each centroid
  /// location, ties broken by lowest index.
  MaxResult max_over_centroids(const ParamStore& store, const Vector& s) const;

  /// Batched best_value of max_over_centroids for B states.
  Vector max_over_centroids_batch(const ParamStore& store, const Matrix& states) const;

  /// Brute-force maximum over a uniform grid on the action box (d <= 3),
  /// with one local refinement pass. Oracle for the gap experiments.
  double grid_max_oracle(const ParamStore& store, const Vector& s, int resolution) const;

  const RbvfModelSpec& spec() const { return spec_; }
  const Mlp& value_net() const { return value_net_; }
  const Mlp& centroid_net() const { return centroid_net_; }

 private:
  // Squash raw centroid-net output into the action box; returns B x (N*d).
  Matrix squash(const Matrix& tanh_out) const;

  RbvfModelSpec spec_;
  Mlp value_net_;
  Mlp centroid_net_;
};

}  // namespace rbvf
