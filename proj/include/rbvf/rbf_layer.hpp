#pragma once

#include <utility>

#include "rbvf/param_store.hpp"

namespace rbvf {

/// A fixed set of centroid locations (N x d) with their values (N).
/// For a fixed state the RBF output layer is exactly this object.
struct FrozenReadout {
  Matrix locations;  // N x d
  Vector values;     // N
};

/// Normalized RBF weights: w_i = exp(-beta*||a - loc_i||) / sum_z exp(-beta*||a - loc_z||),
/// computed as a softmax of logits -beta*||a - loc_i|| with max-logit subtraction.
Vector rbf_weights(const Matrix& locations, const Vector& a, double beta);

/// Normalized RBF interpolant: sum_i w_i * v_i.
double rbf_value(const Matrix& locations, const Vector& values, const Vector& a, double beta);

inline double rbf_value(const FrozenReadout& r, const Vector& a, double beta) {
  return rbf_value(r.locations, r.values, a, beta);
}

/// Unnormalized RBF layer, sum_i exp(-beta*||a - loc_i||) * v_i.
/// Reference evaluator only; not a learning path.
double rbf_value_unnormalized(const Matrix& locations, const Vector& values, const Vector& a,
                              double beta);

struct GridMaxResult {
  double max_value = 0.0;
  Vector argmax;
  double refined_spacing = 0.0;  // per-dimension spacing of the refinement grid
};

/// Brute-force maximum of the normalized RBF interpolant over a uniform grid
/// on [low, high] with `resolution` points per dimension, followed by one
/// local refinement pass: the +/-1-cell neighborhood of the coarse argmax is
/// re-gridded at 10x resolution. Requires d <= 3.
GridMaxResult grid_max(const FrozenReadout& readout, double beta, const Vector& low,
                       const Vector& high, int resolution);

/// max_i f(loc_i): interpolant evaluated at each centroid location.
/// Ties broken by lowest index. Returns (value, index).
std::pair<double, int> centroid_max(const FrozenReadout& readout, double beta);

}  // namespace rbvf
