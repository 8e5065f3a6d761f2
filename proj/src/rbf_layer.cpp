#include "rbvf/rbf_layer.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rbvf {

namespace {

void check_finite(const Vector& a, double beta) {
  if (!a.allFinite() || !std::isfinite(beta) || beta < 0)
    throw std::invalid_argument("rbf_weights: non-finite input or negative beta");
}

}  // namespace

Vector rbf_weights(const Matrix& locations, const Vector& a, double beta) {
  check_finite(a, beta);
  const Eigen::Index n = locations.rows();
  Vector logits(n);
  for (Eigen::Index i = 0; i < n; ++i)
    logits(i) = -beta * (a.transpose() - locations.row(i)).norm();
  const double m = logits.maxCoeff();
  Vector w = (logits.array() - m).exp();
  return w / w.sum();
}

double rbf_value(const Matrix& locations, const Vector& values, const Vector& a, double beta) {
  check_finite(a, beta);
  // At beta = 0 the weights are exactly uniform; summing first keeps the
  // result bitwise equal to the arithmetic mean instead of off by one ulp.
  if (beta == 0.0) return values.mean();
  return rbf_weights(locations, a, beta).dot(values);
}

double rbf_value_unnormalized(const Matrix& locations, const Vector& values, const Vector& a,
                              double beta) {
  check_finite(a, beta);
  double out = 0.0;
  for (Eigen::Index i = 0; i < locations.rows(); ++i)
    out += std::exp(-beta * (a.transpose() - locations.row(i)).norm()) * values(i);
  return out;
}

std::pair<double, int> centroid_max(const FrozenReadout& readout, double beta) {
  double best = -std::numeric_limits<double>::infinity();
  int best_idx = 0;
  for (Eigen::Index i = 0; i < readout.locations.rows(); ++i) {
    const double q = rbf_value(readout, readout.locations.row(i).transpose(), beta);
    if (q > best) {
      best = q;
      best_idx = static_cast<int>(i);
    }
  }
  return {best, best_idx};
}

namespace {

// Batched interpolant values at query points P (M x d).
Vector rbf_values_batch(const FrozenReadout& r, const Matrix& points, double beta) {
  const Eigen::Index m = points.rows();
  const Eigen::Index n = r.locations.rows();
  // Direct per-centroid differences: the ||p||^2 + ||c||^2 - 2 p.c identity
  // cancels catastrophically near centroids, which matters at the tight
  // tolerances the 1-D comparison runs at.
  Matrix logits(m, n);
  for (Eigen::Index i = 0; i < n; ++i)
    logits.col(i) =
        (-beta) * (points.rowwise() - r.locations.row(i)).rowwise().norm();
  Vector out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double mx = logits.row(i).maxCoeff();
    Eigen::ArrayXd w = (logits.row(i).transpose().array() - mx).exp();
    out(i) = (w * r.values.array()).sum() / w.sum();
  }
  return out;
}

struct GridScanResult {
  double max_value;
  Vector argmax;
};

// Exhaustive scan of the axis-aligned grid given per-dimension sample lists.
GridScanResult scan_grid(const FrozenReadout& r, double beta,
                         const std::vector<Vector>& axes) {
  const int d = static_cast<int>(axes.size());
  std::vector<Eigen::Index> idx(d, 0);
  Eigen::Index total = 1;
  for (const auto& ax : axes) total *= ax.size();

  const Eigen::Index chunk = 8192;
  Matrix points(std::min(chunk, total), d);
  GridScanResult best{-std::numeric_limits<double>::infinity(), Vector::Zero(d)};
  Eigen::Index filled = 0;
  auto flush = [&]() {
    if (filled == 0) return;
    const Matrix block = points.topRows(filled);
    Vector vals = rbf_values_batch(r, block, beta);
    Eigen::Index arg;
    const double v = vals.maxCoeff(&arg);
    if (v > best.max_value) {
      best.max_value = v;
      best.argmax = block.row(arg).transpose();
    }
    filled = 0;
  };

  for (Eigen::Index k = 0; k < total; ++k) {
    for (int j = 0; j < d; ++j) points(filled, j) = axes[j](idx[j]);
    if (++filled == points.rows()) flush();
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < axes[j].size()) break;
      idx[j] = 0;
    }
  }
  flush();
  return best;
}

Vector linspace(double lo, double hi, Eigen::Index n) {
  return Vector::LinSpaced(std::max<Eigen::Index>(n, 2), lo, hi);
}

}  // namespace

GridMaxResult grid_max(const FrozenReadout& readout, double beta, const Vector& low,
                       const Vector& high, int resolution) {
  const int d = static_cast<int>(low.size());
  if (d > 3) throw std::invalid_argument("grid_max: d > 3 not supported");
  if (resolution < 2) throw std::invalid_argument("grid_max: resolution must be >= 2");

  std::vector<Vector> axes(d);
  for (int j = 0; j < d; ++j) axes[j] = linspace(low(j), high(j), resolution);
  const GridScanResult coarse = scan_grid(readout, beta, axes);

  // Refinement: re-grid the +/-1-cell neighborhood of each candidate maximum
  // at 10x resolution per dimension. Candidates are the coarse argmax plus
  // every centroid location, so a near-tied local maximum at a centroid is
  // never resolved only at coarse spacing.
  // Capped: beyond ~1e5 points per axis the window spacing is already far
  // below any tolerance in use, and each extra point is pure scan cost.
  const Eigen::Index fine_n = std::min<Eigen::Index>(10LL * resolution, 100000);
  GridMaxResult out;
  out.max_value = coarse.max_value;
  out.argmax = coarse.argmax;
  out.refined_spacing = 0.0;

  std::vector<Vector> centers{coarse.argmax};
  for (Eigen::Index i = 0; i < readout.locations.rows(); ++i)
    centers.push_back(readout.locations.row(i).transpose());

  for (const Vector& c : centers) {
    std::vector<Vector> fine_axes(d);
    double spacing = 0.0;
    bool inside = true;
    for (int j = 0; j < d; ++j) {
      if (c(j) < low(j) || c(j) > high(j)) inside = false;
      const double h = (high(j) - low(j)) / (resolution - 1);
      const double lo = std::max(low(j), c(j) - h);
      const double hi = std::min(high(j), c(j) + h);
      fine_axes[j] = linspace(lo, hi, fine_n);
      spacing = std::max(spacing, (hi - lo) / (fine_n - 1));
    }
    if (!inside) continue;
    const GridScanResult fine = scan_grid(readout, beta, fine_axes);
    if (fine.max_value > out.max_value) {
      out.max_value = fine.max_value;
      out.argmax = fine.argmax;
    }
    out.refined_spacing = std::max(out.refined_spacing, spacing);
  }
  return out;
}

}  // namespace rbvf
