#include <doctest.h>

#include <random>

#include "nonhom/generators.hpp"
#include "nonhom/measure.hpp"
#include "test_support.hpp"

using namespace nonhom;
using namespace nonhom::testing;

// Brute-force oracle: plain loop, no candidate pruning.
static double naive_ball_mass(const DiscreteMeasure& mu, const Eigen::VectorXd& x,
                              double r) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if ((mu.point(i) - x).norm() <= r) s += mu.mass(i);
  return s;
}

static double naive_cube_mass(const DiscreteMeasure& mu, const Cube& q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (q.contains(mu.point(i))) s += mu.mass(i);
  return s;
}

TEST_CASE("ball_mass examples") {
  auto mu = line_measure({0.0}, {2.0}, 0.5);
  CHECK(ball_mass(mu, pt1(0.0), 1.0) == 2.0);
  CHECK(ball_mass(mu, pt1(10.0), 1.0) == 0.0);

  auto mu2 = line_measure({0.0, 1.0}, {1.0, 1.0}, 0.25);
  CHECK(ball_mass(mu2, pt1(0.0), 0.5) == 1.0);
}

TEST_CASE("cube_mass examples") {
  auto mu = line_measure({0.0}, {1.0}, 0.1);
  CHECK(cube_mass(mu, cube1(0.0, 0.7)) == 1.0);

  auto mu2 = line_measure({0.0, 1.0}, {1.0, 1.0}, 0.1);
  // both endpoints on the boundary of the closed cube
  CHECK(cube_mass(mu2, cube1(0.5, 1.0)) == 2.0);
  // 1 is outside [-0.95, 0.95]
  CHECK(cube_mass(mu2, cube1(0.0, 1.9)) == 1.0);
}

TEST_CASE("growth_constant examples") {
  AnalysisContext ctx;
  ctx.n = 1;
  {
    auto mu = line_measure({0.0}, {1.0}, 1.0);
    CHECK(growth_constant(mu, ctx) == doctest::Approx(1.0));
  }
  {
    auto mu = line_measure({0.0}, {8.0}, 2.0);
    CHECK(growth_constant(mu, ctx) == doctest::Approx(4.0));
  }
  {
    // 101 points at k/100, masses 1/100, r_min = 0.01: brute-force oracle.
    std::vector<double> xs(101), ms(101, 0.01);
    for (int k = 0; k <= 100; ++k) xs[k] = k / 100.0;
    auto mu = line_measure(xs, ms, 0.01);
    double c0 = growth_constant(mu, ctx);
    CHECK(c0 >= 1.0);
    CHECK(c0 <= 3.0);
    // oracle: max over all support points and all candidate radii
    double best = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      best = std::max(best, naive_ball_mass(mu, mu.point(i), 0.01) / 0.01);
      for (Eigen::Index j = 0; j < mu.size(); ++j) {
        double r = std::abs(xs[i] - xs[j]);
        if (r >= 0.01) best = std::max(best, naive_ball_mass(mu, mu.point(i), r) / r);
      }
    }
    CHECK(c0 == doctest::Approx(best).epsilon(1e-13));
  }
}

TEST_CASE("mean examples") {
  auto mu = line_measure({0.0, 1.0}, {1.0, 1.0}, 0.1);
  auto f = fn({3.5, 3.5});
  CHECK(mean(mu, f, cube1(0.5, 2.0)) == 3.5);
  CHECK(mean(mu, fn({0.0, 4.0}), cube1(0.5, 2.0)) == 2.0);

  auto mu2 = line_measure({0.0, 1.0}, {1.0, 3.0}, 0.1);
  CHECK(mean(mu2, fn({0.0, 4.0}), cube1(0.5, 2.0)) == 3.0);

  CHECK_THROWS_AS(mean(mu, f, cube1(10.0, 0.5)), Error);
}

TEST_CASE("support_diameter examples") {
  CHECK(support_diameter(line_measure({5.0}, {1.0})) == 0.0);
  CHECK(support_diameter(line_measure({0.0, 3.0}, {1.0, 1.0})) == 3.0);
  auto sq = plane_measure({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {1, 1, 1, 1});
  CHECK(support_diameter(sq) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("measure invariants rejected at construction") {
  CHECK_THROWS_AS(line_measure({0.0, 0.0}, {1.0, 1.0}), Error);  // duplicate points
  CHECK_THROWS_AS(line_measure({0.0}, {0.0}), Error);            // zero mass
  CHECK_THROWS_AS(line_measure({0.0}, {1.0}, 0.0), Error);       // bad r_min
  CHECK_THROWS_AS(line_measure({0.0}, {-1.0}), Error);           // negative mass
}

TEST_CASE("monotonicity and growth certificate on random measures") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    DiscreteMeasure mu = make_random_clusters(1000 + trial, 40, trial % 2 + 1);
    AnalysisContext ctx;
    ctx.n = 1;
    const double diam = support_diameter(mu);

    // ball/cube monotonicity in the radius/side
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd x = mu.point(static_cast<Eigen::Index>(unif(rng) * mu.size()) %
                                   mu.size());
      double r1 = mu.r_min() + unif(rng) * diam;
      double r2 = r1 + unif(rng) * diam;
      CHECK(ball_mass(mu, x, r1) <= ball_mass(mu, x, r2));
      CHECK(cube_mass(mu, Cube(x, r1)) <= cube_mass(mu, Cube(x, r2)));
      // accelerated path matches naive enumeration bit for bit
      CHECK(ball_mass(mu, x, r1) == naive_ball_mass(mu, x, r1));
      CHECK(cube_mass(mu, Cube(x, r1)) == naive_cube_mass(mu, Cube(x, r1)));
      // cube inside the circumscribed ball
      double side = r1;
      CHECK(cube_mass(mu, Cube(x, side)) <=
            ball_mass(mu, x, side * std::sqrt(mu.dimension()) / 2.0));
    }

    // growth certificate: exact at every support point and sampled radius
    const double c0 = growth_constant(mu, ctx);
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      for (int t = 0; t < 8; ++t) {
        double r = mu.r_min() * std::pow(2.0 * diam / mu.r_min() + 1.0, unif(rng));
        CHECK(ball_mass(mu, mu.point(i), r) <= c0 * std::pow(r, ctx.n));
      }
    }
  }
}

TEST_CASE("mean is affine") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  DiscreteMeasure mu = make_random_clusters(5, 30, 1);
  RealFunction f(mu.size()), g(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    f[i] = unif(rng);
    g[i] = unif(rng);
  }
  Cube q(mu.point(3), 0.5);
  if (cube_mass(mu, q) > 0.0) {
    double a = 2.5, b = -1.25;
    CHECK(mean(mu, a * f + b * g, q) ==
          doctest::Approx(a * mean(mu, f, q) + b * mean(mu, g, q)).epsilon(1e-12));
  }
}
