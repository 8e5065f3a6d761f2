#include <doctest.h>

#include <cmath>
#include <random>

#include "rbvf/theory.hpp"

using namespace rbvf;

namespace {

FrozenReadout random_readout_1d(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  FrozenReadout r;
  r.locations.resize(n, 1);
  r.values.resize(n);
  for (int i = 0; i < n; ++i) {
    r.locations(i, 0) = unif(rng);
    r.values(i) = unif(rng);
  }
  return r;
}

// Planar gap fixture: a near-tied pair of high-value centroids plus a distant
// low-value one. Moving away from the low centroid dilutes its pull, so the
// true maximum sits off-centroid and the gap is genuinely positive.
FrozenReadout triangle_readout() {
  FrozenReadout r;
  r.locations.resize(3, 2);
  r.locations << -1.0, -1.0, -0.3, -1.0, -1.0, 1.0;
  r.values.resize(3);
  r.values << 1.0, 0.9, -1.0;
  return r;
}

}  // namespace

TEST_CASE("1-D: grid max equals centroid max up to grid tolerance") {
  SUBCASE("two-centroid fixture") {
    FrozenReadout r;
    r.locations.resize(2, 1);
    r.locations << 0.0, 1.0;
    r.values.resize(2);
    r.values << 0.0, 1.0;
    const GapReport g = verify_gap_1d(r, 1.0, -2.0, 2.0, 100000);
    CHECK(g.centroid_max == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    CHECK(std::abs(g.gap) <= g.tolerance);
    CHECK(g.tolerance <= 1e-6);
  }

  SUBCASE("50 random fixtures") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> pick_n(2, 20);
    std::uniform_real_distribution<double> pick_beta(0.1, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const FrozenReadout r = random_readout_1d(rng, pick_n(rng));
      const GapReport g = verify_gap_1d(r, pick_beta(rng), -2.0, 2.0, 20000);
      REQUIRE(std::abs(g.gap) <= g.tolerance);
    }
  }

  SUBCASE("equal centroid values give zero gap outright") {
    FrozenReadout r;
    r.locations.resize(3, 1);
    r.locations << -1.0, 0.0, 1.5;
    r.values = Vector::Constant(3, 0.7);
    const GapReport g = verify_gap_1d(r, 2.0, -2.0, 2.0, 5000);
    CHECK(g.grid_max == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(g.centroid_max == doctest::Approx(0.7).epsilon(1e-12));
  }
}

TEST_CASE("multi-d gap shrinks with beta and respects the explicit bound") {
  const FrozenReadout r = triangle_readout();
  const Vector lo = Vector::Constant(2, -2.0), hi = Vector::Constant(2, 2.0);
  const std::vector<double> betas{0.25, 1.0, 1.5, 2.0, 4.0, 8.0};
  const auto reports = gap_vs_beta(r, betas, lo, hi, 400);
  REQUIRE(reports.size() == betas.size());

  double prev_gap = std::numeric_limits<double>::infinity();
  std::vector<double> xs, ys;  // (beta, log gap) where the gap is resolvable
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const GapReport& g = reports[k];
    // The true gap is nonnegative; the grid estimate can dip below zero by
    // at most the grid tolerance.
    REQUIRE(g.gap >= -g.tolerance);
    REQUIRE(g.gap <= prev_gap + g.tolerance);
    REQUIRE(g.gap <= gap_upper_bound(r, g.beta) + g.tolerance);
    prev_gap = g.gap;
    if (g.gap > 10.0 * g.tolerance) {
      xs.push_back(g.beta);
      ys.push_back(std::log(g.gap));
    }
  }

  // O(e^-beta) decay: least-squares slope of log gap vs beta is negative
  // over the betas where the gap clears the grid tolerance.
  REQUIRE(xs.size() >= 2);
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  CHECK((n * sxy - sx * sy) / (n * sxx - sx * sx) < 0.0);
}

TEST_CASE("gap upper bound closed form on a two-centroid readout") {
  FrozenReadout r;
  r.locations.resize(2, 2);
  r.locations << 0.0, 0.0, 3.0, 4.0;  // distance 5
  r.values.resize(2);
  r.values << 2.0, -1.0;
  // Delta = 3, single far centroid: 3 / (1 + e^{5 beta})
  CHECK(gap_upper_bound(r, 1.0) ==
        doctest::Approx(3.0 / (1.0 + std::exp(5.0))).epsilon(1e-12));
  CHECK(gap_upper_bound(r, 0.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("ufa construction geometry") {
  SUBCASE("linear target on [0,1], L=1, eps=0.4 needs at least 6 centroids") {
    auto target = [](const Vector& a) { return a(0); };
    const auto c = build_ufa_approximator(target, Vector::Constant(1, 0.0),
                                          Vector::Constant(1, 1.0), 1.0, 0.4);
    // Half-diagonal h/2 <= eps/(4L) = 0.1 forces spacing <= 0.2.
    CHECK(c.grid_shape[0] >= 6);
    CHECK(c.spacing <= 0.2 + 1e-12);
    CHECK(c.readout.locations.rows() == c.grid_shape[0]);
    CHECK(c.mu > 0.0);
    CHECK(c.beta0 > 0.0);
    CHECK(c.sup_abs_target == doctest::Approx(1.0).epsilon(1e-12));
    // Centroid values are exact target values.
    for (Eigen::Index i = 0; i < c.readout.values.size(); ++i)
      CHECK(c.readout.values(i) ==
            doctest::Approx(c.readout.locations(i, 0)).epsilon(1e-12));
  }

  SUBCASE("2-d grid accounts for the sqrt(d) half-diagonal") {
    auto target = [](const Vector& a) { return a(0) + a(1); };
    const auto c = build_ufa_approximator(target, Vector::Constant(2, 0.0),
                                          Vector::Constant(2, 1.0), 2.0, 0.5);
    // h <= eps/(2 L sqrt(d)) = 0.5/(4 sqrt 2) ~ 0.0884
    CHECK(c.spacing <= 0.5 / (4.0 * std::sqrt(2.0)) + 1e-12);
    CHECK(c.grid_shape.size() == 2);
    CHECK(c.readout.locations.rows() ==
          static_cast<Eigen::Index>(c.grid_shape[0]) * c.grid_shape[1]);
  }

  SUBCASE("a tiny epsilon overruns the centroid cap") {
    auto target = [](const Vector& a) { return a(0); };
    CHECK_THROWS_AS(build_ufa_approximator(target, Vector::Constant(2, 0.0),
                                           Vector::Constant(2, 1.0), 1.0, 1e-4, 1000),
                    UfaGridTooLarge);
  }
}

TEST_CASE("ufa error behaviour in beta") {
  auto linear = [](const Vector& a) { return 2.0 * a(0) - 0.5; };
  const auto c = build_ufa_approximator(linear, Vector::Constant(1, 0.0),
                                        Vector::Constant(1, 1.0), 2.0, 0.3);

  SUBCASE("beta -> infinity: interpolant is exact at the centroids") {
    FrozenReadout probe = c.readout;
    for (Eigen::Index i = 0; i < probe.locations.rows(); ++i) {
      const double v = rbf_value(probe, probe.locations.row(i).transpose(), 1e3);
      REQUIRE(std::abs(v - c.target(probe.locations.row(i).transpose())) <= 1e-6);
    }
  }

  SUBCASE("beta = 0 collapses to the mean of centroid values") {
    const double mean = c.readout.values.mean();
    double expected = 0.0;
    const int res = 101;
    for (int k = 0; k < res; ++k) {
      Vector a = Vector::Constant(1, static_cast<double>(k) / (res - 1));
      expected = std::max(expected, std::abs(c.target(a) - mean));
    }
    CHECK(ufa_error(c, 0.0, res) == doctest::Approx(expected).epsilon(1e-10));
  }

  SUBCASE("beta0 and its multiples achieve the epsilon bound") {
    for (double mult : {1.0, 2.0, 4.0})
      REQUIRE(ufa_error(c, mult * c.beta0, 500) <= c.epsilon);
  }
}

TEST_CASE("constant target is reproduced with zero error at any beta") {
  auto constant = [](const Vector&) { return 0.75; };
  const auto c = build_ufa_approximator(constant, Vector::Constant(1, -1.0),
                                        Vector::Constant(1, 1.0), 0.5, 0.5);
  for (double beta : {0.0, 1.0, c.beta0})
    CHECK(ufa_error(c, beta, 301) <= 1e-12);
}

TEST_CASE("numeric lipschitz estimate brackets simple targets") {
  auto linear = [](const Vector& a) { return 3.0 * a(0); };
  const double l = estimate_lipschitz(linear, Vector::Constant(1, -1.0),
                                      Vector::Constant(1, 1.0), 200);
  CHECK(l == doctest::Approx(3.0).epsilon(1e-6));

  auto sine = [](const Vector& a) { return std::sin(a(0)); };
  const double ls = estimate_lipschitz(sine, Vector::Constant(1, -3.0),
                                       Vector::Constant(1, 3.0), 2000);
  CHECK(ls <= 1.0 + 1e-6);
  CHECK(ls >= 0.99);
}
