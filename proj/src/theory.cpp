#include "rbvf/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace rbvf {

namespace {

GapReport make_report(const FrozenReadout& readout, double beta, const Vector& low,
                      const Vector& high, int resolution) {
  const int d = static_cast<int>(low.size());
  const GridMaxResult g = grid_max(readout, beta, low, high, resolution);
  const auto [cmax, cidx] = centroid_max(readout, beta);
  GapReport rep;
  rep.dims = d;
  rep.num_centroids = static_cast<int>(readout.locations.rows());
  rep.beta = beta;
  rep.resolution = resolution;
  rep.grid_max = g.max_value;
  rep.centroid_max = cmax;
  rep.gap = g.max_value - cmax;
  const double value_range = readout.values.maxCoeff() - readout.values.minCoeff();
  rep.tolerance = beta * value_range * g.refined_spacing * std::sqrt(static_cast<double>(d));
  return rep;
}

}  // namespace

GapReport verify_gap_1d(const FrozenReadout& readout, double beta, double low, double high,
                        int resolution) {
  if (readout.locations.cols() != 1) throw std::invalid_argument("verify_gap_1d: d must be 1");
  Vector lo(1), hi(1);
  lo << low;
  hi << high;
  return make_report(readout, beta, lo, hi, resolution);
}

std::vector<GapReport> gap_vs_beta(const FrozenReadout& readout,
                                   const std::vector<double>& betas, const Vector& low,
                                   const Vector& high, int resolution) {
  std::vector<GapReport> out;
  out.reserve(betas.size());
  for (double b : betas) out.push_back(make_report(readout, b, low, high, resolution));
  return out;
}

double gap_upper_bound(const FrozenReadout& readout, double beta) {
  Eigen::Index star;
  readout.values.maxCoeff(&star);
  const double delta = readout.values(star) - readout.values.minCoeff();
  double bound = 0.0;
  for (Eigen::Index i = 0; i < readout.locations.rows(); ++i) {
    if (i == star) continue;
    const double dist = (readout.locations.row(star) - readout.locations.row(i)).norm();
    bound += delta / (1.0 + std::exp(beta * dist));
  }
  return bound;
}

namespace {

// Iterates the cartesian grid defined by per-dimension point counts.
template <typename F>
void for_each_grid_point(const Vector& low, const Vector& high, const std::vector<int>& shape,
                         F&& fn) {
  const int d = static_cast<int>(shape.size());
  std::vector<int> idx(d, 0);
  Vector p(d);
  while (true) {
    for (int j = 0; j < d; ++j)
      p(j) = shape[j] == 1 ? 0.5 * (low(j) + high(j))
                           : low(j) + (high(j) - low(j)) * idx[j] / (shape[j] - 1);
    fn(p, idx);
    int j = d - 1;
    for (; j >= 0; --j) {
      if (++idx[j] < shape[j]) break;
      idx[j] = 0;
    }
    if (j < 0) break;
  }
}

// Chebyshev distance between grid index vectors.
int cheb_dist(const std::vector<int>& a, const std::vector<int>& b) {
  int m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

double estimate_lipschitz(const TargetFn& target, const Vector& low, const Vector& high,
                          int resolution) {
  const int d = static_cast<int>(low.size());
  std::vector<int> shape(d, resolution);
  double best = 0.0;
  const double h = 1e-5;
  for_each_grid_point(low, high, shape, [&](const Vector& p, const std::vector<int>&) {
    for (int j = 0; j < d; ++j) {
      Vector pp = p, pm = p;
      pp(j) = std::min(high(j), p(j) + h);
      pm(j) = std::max(low(j), p(j) - h);
      const double denom = pp(j) - pm(j);
      if (denom > 0) best = std::max(best, std::abs(target(pp) - target(pm)) / denom);
    }
  });
  return best * std::sqrt(static_cast<double>(d));
}

UfaConstruction build_ufa_approximator(TargetFn target, const Vector& low, const Vector& high,
                                       double lipschitz, double epsilon,
                                       std::size_t max_centroids) {
  if (epsilon <= 0) throw std::invalid_argument("build_ufa_approximator: epsilon must be > 0");
  if (lipschitz <= 0) throw std::invalid_argument("build_ufa_approximator: lipschitz must be > 0");
  const int d = static_cast<int>(low.size());
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  // Cell half-diagonal sqrt(d)*h/2 must not exceed eps/(4L).
  const double h_max = epsilon / (2.0 * lipschitz * sqrt_d);
  UfaConstruction c;
  c.target = std::move(target);
  c.lipschitz = lipschitz;
  c.epsilon = epsilon;
  c.low = low;
  c.high = high;
  c.grid_shape.resize(d);
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) {
    c.grid_shape[j] = std::max(2, static_cast<int>(std::ceil((high(j) - low(j)) / h_max)) + 1);
    total *= static_cast<std::size_t>(c.grid_shape[j]);
  }
  if (total > max_centroids) throw UfaGridTooLarge(total, max_centroids);

  c.spacing = 0.0;
  for (int j = 0; j < d; ++j)
    c.spacing = std::max(c.spacing, (high(j) - low(j)) / (c.grid_shape[j] - 1));

  c.readout.locations.resize(static_cast<Eigen::Index>(total), d);
  c.readout.values.resize(static_cast<Eigen::Index>(total));
  Eigen::Index row = 0;
  c.sup_abs_target = 0.0;
  for_each_grid_point(low, high, c.grid_shape, [&](const Vector& p, const std::vector<int>&) {
    c.readout.locations.row(row) = p.transpose();
    c.readout.values(row) = c.target(p);
    c.sup_abs_target = std::max(c.sup_abs_target, std::abs(c.readout.values(row)));
    ++row;
  });

  // Numeric mu: minimum positive margin ||a - c_far|| - ||a - c_near|| over a
  // dense query sample, far cells being Chebyshev-index distance >= 2 from
  // the nearest cell.
  double mu = std::numeric_limits<double>::infinity();
  std::vector<int> sample_shape(d, d == 1 ? 257 : 33);
  for_each_grid_point(low, high, sample_shape, [&](const Vector& a, const std::vector<int>&) {
    std::vector<int> near_idx(d);
    for (int j = 0; j < d; ++j) {
      const double step = (high(j) - low(j)) / (c.grid_shape[j] - 1);
      near_idx[j] = std::clamp(static_cast<int>(std::lround((a(j) - low(j)) / step)), 0,
                               c.grid_shape[j] - 1);
    }
    Vector nearest(d);
    for (int j = 0; j < d; ++j) {
      const double step = (high(j) - low(j)) / (c.grid_shape[j] - 1);
      nearest(j) = low(j) + near_idx[j] * step;
    }
    const double dnear = (a - nearest).norm();
    Eigen::Index r = 0;
    for_each_grid_point(low, high, c.grid_shape, [&](const Vector& cj, const std::vector<int>& ji) {
      if (cheb_dist(ji, near_idx) >= 2) {
        const double margin = (a - cj).norm() - dnear;
        if (margin > 0) mu = std::min(mu, margin);
      }
      ++r;
    });
  });
  if (std::isfinite(mu)) {
    c.mu = mu;
    c.mu_is_fallback = false;
  } else {
    // No far cells (tiny grids): conservative analytic fallback.
    c.mu = c.spacing;
    c.mu_is_fallback = true;
  }

  const double n = static_cast<double>(total);
  if (c.sup_abs_target > 0) {
    const double arg = epsilon / (8.0 * n * c.sup_abs_target);
    c.beta0 = arg >= 1.0 ? 0.0 : (-1.0 / c.mu) * std::log(arg);
  } else {
    c.beta0 = 0.0;
  }
  return c;
}

double ufa_error(const UfaConstruction& c, double beta, int eval_resolution) {
  const int d = static_cast<int>(c.low.size());
  const Eigen::Index n = c.readout.locations.rows();
  const Vector cent_sq = c.readout.locations.rowwise().squaredNorm();

  std::vector<int> shape(d, eval_resolution);
  const Eigen::Index chunk = 256;
  Matrix points(chunk, d);
  std::vector<double> targets(static_cast<std::size_t>(chunk));
  Eigen::Index filled = 0;
  double sup_err = 0.0;

  auto flush = [&]() {
    if (filled == 0) return;
    const Matrix block = points.topRows(filled);
    Matrix d2 = (-2.0 * block * c.readout.locations.transpose());
    d2.colwise() += block.rowwise().squaredNorm();
    d2.rowwise() += cent_sq.transpose();
    for (Eigen::Index r = 0; r < filled; ++r) {
      double min_d2 = d2.row(r).minCoeff();
      const double dmin = std::sqrt(std::max(0.0, min_d2));
      double wsum = 0.0, qsum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double logit = -beta * (std::sqrt(std::max(0.0, d2(r, i))) - dmin);
        if (logit > -745.0) {
          const double w = std::exp(logit);
          wsum += w;
          qsum += w * c.readout.values(i);
        }
      }
      sup_err = std::max(sup_err, std::abs(targets[static_cast<std::size_t>(r)] - qsum / wsum));
    }
    filled = 0;
  };

  for_each_grid_point(c.low, c.high, shape, [&](const Vector& p, const std::vector<int>&) {
    points.row(filled) = p.transpose();
    targets[static_cast<std::size_t>(filled)] = c.target(p);
    if (++filled == chunk) flush();
  });
  flush();
  return sup_err;
}

}  // namespace rbvf
