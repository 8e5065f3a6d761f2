#pragma once

#include <functional>
#include <vector>

#include "rbvf/rbf_layer.hpp"

namespace rbvf {

/// One measured comparison between the brute-force grid maximum and the
/// max-over-centroids value of a frozen readout.
struct GapReport {
  int dims = 0;
  int num_centroids = 0;
  double beta = 0.0;
  int resolution = 0;
  double grid_max = 0.0;
  double centroid_max = 0.0;
  double gap = 0.0;        // grid_max - centroid_max
  double tolerance = 0.0;  // Lipschitz bound x refined grid spacing
};

/// Grid-vs-centroid maximum on a 1-D readout. The two agree up to grid
/// tolerance (exact equality analytically).
GapReport verify_gap_1d(const FrozenReadout& readout, double beta, double low, double high,
                        int resolution);

/// Gap measurements across a beta sweep on a fixed multi-d readout.
std::vector<GapReport> gap_vs_beta(const FrozenReadout& readout,
                                   const std::vector<double>& betas, const Vector& low,
                                   const Vector& high, int resolution);

/// Explicit upper envelope on the gap: Delta * sum_{i != i*} 1/(1+e^{beta*||a_i* - a_i||})
/// with i* the argmax centroid value and Delta its margin over the minimum.
double gap_upper_bound(const FrozenReadout& readout, double beta);

using TargetFn = std::function<double(const Vector&)>;

struct UfaConstruction {
  TargetFn target;
  double lipschitz = 0.0;
  double epsilon = 0.0;
  Vector low, high;
  FrozenReadout readout;        // grid centroids with exact target values
  std::vector<int> grid_shape;  // centroids per dimension
  double spacing = 0.0;         // actual per-dimension grid spacing
  double mu = 0.0;              // far-cell distance margin (numeric estimate)
  bool mu_is_fallback = false;  // true when the analytic fallback (mu = spacing) was used
  double beta0 = 0.0;
  double sup_abs_target = 0.0;
};

struct UfaGridTooLarge : std::runtime_error {
  UfaGridTooLarge(std::size_t required, std::size_t cap)
      : std::runtime_error("UFA grid would need " + std::to_string(required) +
                           " centroids, cap is " + std::to_string(cap)),
        required_centroids(required) {}
  std::size_t required_centroids;
};

/// Uniform-grid centroid construction with half-diagonal <= eps/(4L), plus
/// the numeric mu estimate and the beta0 threshold.
UfaConstruction build_ufa_approximator(TargetFn target, const Vector& low, const Vector& high,
                                       double lipschitz, double epsilon,
                                       std::size_t max_centroids = 200000);

/// Sup over an eval_resolution^d grid of |target(a) - interpolant(a)|.
double ufa_error(const UfaConstruction& c, double beta, int eval_resolution);

/// Numeric Lipschitz-constant estimate by dense sampling of difference
/// quotients. Flagged as an estimate, not a certificate.
double estimate_lipschitz(const TargetFn& target, const Vector& low, const Vector& high,
                          int resolution);

}  // namespace rbvf
