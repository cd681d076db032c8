#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "nonhom/cubes.hpp"
#include "nonhom/generators.hpp"
#include "sweeps.hpp"
#include "test_support.hpp"

using namespace nonhom;
using namespace nonhom::testing;

TEST_CASE("n_steps examples") {
  Cube q = cube1(0.0, 1.0);
  CHECK(n_steps(NestedCubePair(q, q)) == 0);
  CHECK(n_steps(NestedCubePair(q, cube1(0.0, 4.0))) == 2);
  CHECK(n_steps(NestedCubePair(q, cube1(0.0, 5.0))) == 3);
  CHECK_THROWS_AS(NestedCubePair(cube1(0.0, 2.0), cube1(5.0, 1.0)), Error);
}

TEST_CASE("k_coeff examples") {
  AnalysisContext ctx;
  ctx.n = 1;
  SUBCASE("identical cubes give 1") {
    auto mu = line_measure({0.0}, {3.0}, 0.1);
    Cube q = cube1(0.0, 1.0);
    CHECK(k_coeff(mu, ctx, NestedCubePair(q, q)) == 1.0);
  }
  SUBCASE("single mass at the center, two dilation steps") {
    const double m = 3.0, s = 1.0;
    auto mu = line_measure({0.0}, {m}, 0.1);
    NestedCubePair pair(cube1(0.0, s), cube1(0.0, 4.0 * s));
    CHECK(k_coeff(mu, ctx, pair) ==
          doctest::Approx(1.0 + m / (2.0 * s) + m / (4.0 * s)));
  }
  SUBCASE("log growth on the uniform segment") {
    // 2^12 + 1 equispaced points of unit density
    DiscreteMeasure mu = make_segment((1 << 12) + 1);
    Eigen::VectorXd x = mu.point(2048);  // interior point
    for (int j = 1; j <= 8; ++j) {
      double lq = std::ldexp(1.0, -10);
      NestedCubePair pair(Cube(x, lq), Cube(x, std::ldexp(lq, j)));
      double k = k_coeff(mu, ctx, pair);
      double logform = 1.0 + j;
      CHECK(k / logform >= 1.0 / 3.0);
      CHECK(k / logform <= 3.0);
    }
  }
}

TEST_CASE("k_coeff_radial examples") {
  AnalysisContext ctx;
  ctx.n = 1;
  SUBCASE("empty shell") {
    auto mu = line_measure({0.0}, {1.0}, 0.1);
    // only the center point; shell [l(Q), l(R)] around it is empty
    CHECK(k_coeff_radial(mu, ctx, NestedCubePair(cube1(0.0, 1.0), cube1(0.0, 4.0))) ==
          1.0);
  }
  SUBCASE("single unit mass at distance 2") {
    auto mu = line_measure({0.0, 2.0}, {1.0, 1.0}, 0.1);
    NestedCubePair pair(cube1(0.0, 1.0), cube1(0.0, 4.0));
    CHECK(k_coeff_radial(mu, ctx, pair) == doctest::Approx(1.5));
  }
  SUBCASE("comparable to the grid form over a sweep") {
    auto st = sweeps::kradial_sweep(120, 2024);
    CHECK(st.max_ratio <= fixture_cap("kradial_comparability_C"));
  }
}

TEST_CASE("is_doubling examples") {
  auto single = line_measure({0.5}, {2.0}, 0.1);
  CHECK(is_doubling(single, cube1(0.5, 1.0), 2.0, 2.0));

  auto two = line_measure({0.0, 1.0}, {1.0, 1.0}, 0.1);
  CHECK_FALSE(is_doubling(two, cube1(0.0, 1.0), 2.0, 1.5));
  CHECK(is_doubling(two, cube1(0.0, 1.0), 2.0, 2.0));
  // zero-mass cube counts as doubling iff the dilate is empty too
  CHECK(is_doubling(two, cube1(10.0, 0.5), 2.0, 2.0));
  CHECK_FALSE(is_doubling(two, cube1(1.8, 1.0), 2.0, 2.0));
}

TEST_CASE("doubling_companion examples") {
  AnalysisContext ctx;
  ctx.n = 1;
  ctx.beta_d = 4.0;
  SUBCASE("already doubling stays put") {
    auto mu = line_measure({0.0, 1.0}, {1.0, 1.0}, 0.05);
    Cube q = cube1(0.0, 0.1);
    // masses are equal, so the first dilate adds nothing: N = 0
    Cube qt = doubling_companion(mu, ctx, q);
    CHECK(qt.side == 0.1);
  }
  SUBCASE("single-point support") {
    auto mu = line_measure({0.0}, {1.0}, 0.05);
    CHECK(doubling_companion(mu, ctx, cube1(0.0, 0.3)).side == 0.3);
  }
  SUBCASE("mass jump forces one dilation") {
    // oracle: N=0 has mu(Q)=0.1, mu(2Q)=10.1 > 4*0.1; N=1 doubles fine
    auto mu = line_measure({0.0, 1.0}, {0.1, 10.0}, 0.05);
    Cube qt = doubling_companion(mu, ctx, cube1(0.0, 1.2));
    CHECK(qt.side == doctest::Approx(2.4));
  }
  SUBCASE("companion contains the cube and is idempotent") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
      DiscreteMeasure mu = make_random_clusters(300 + t, 40, 1 + t % 2);
      AnalysisContext c2 = AnalysisContext::for_dimension(1, mu.dimension());
      std::uniform_int_distribution<Eigen::Index> pick(0, mu.size() - 1);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      Cube q(mu.point(pick(rng)), mu.r_min() * (1.0 + 10.0 * unif(rng)));
      Cube qt = doubling_companion(mu, c2, q);
      CHECK(qt.contains_cube(q));
      CHECK(is_doubling(mu, qt, 2.0, effective_beta_d(mu, c2)));
      if (is_doubling(mu, q, 2.0, effective_beta_d(mu, c2)))
        CHECK(qt.side == q.side);
    }
  }
}

TEST_CASE("largest_doubling_below") {
  AnalysisContext ctx;
  ctx.n = 1;
  SUBCASE("single-point support takes the full scale") {
    auto mu = line_measure({0.0}, {1.0}, 0.01);
    auto q = largest_doubling_below(mu, ctx, pt1(0.0), 1.0);
    REQUIRE(q.has_value());
    CHECK(q->side == 1.0);
  }
  SUBCASE("unsatisfiable predicate gives none") {
    auto mu = line_measure({0.0}, {1.0}, 0.01);
    auto q = largest_doubling_below(mu, ctx, pt1(0.0), 1.0,
                                    [](const Cube&) { return false; });
    CHECK_FALSE(q.has_value());
  }
  SUBCASE("largest doubling cube with a high mean of |f|") {
    const double eps = 0.01, h = 0.01;
    DiscreteMeasure mu = make_eps_weighted(h, eps);
    AnalysisContext c2 = AnalysisContext::for_dimension(1, 2);
    RealFunction f = make_step_pair_function(mu, eps);
    const double lambda = 0.5 / eps;
    // support point closest to 0.3
    Eigen::Index xi = 0;
    double best = 1e9;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      double d = std::abs(mu.points()(i, 0) - 0.3);
      if (d < best) {
        best = d;
        xi = i;
      }
    }
    auto pred = [&](const Cube& q) {
      CubeIntegral acc = integrate_on_cube(mu, f.abs(), q);
      return acc.mass > 0.0 && acc.weighted / acc.mass > lambda;
    };
    auto got = largest_doubling_below(mu, c2, mu.point(xi), 1.0, pred);
    // oracle scan over the same side ladder
    std::optional<Cube> expect;
    for (double side = 1.0; side >= mu.r_min(); side /= 2.0) {
      Cube q(mu.point(xi), side);
      if (is_doubling(mu, q, 2.0, effective_beta_d(mu, c2)) && pred(q)) {
        expect = q;
        break;
      }
    }
    REQUIRE(got.has_value());
    REQUIRE(expect.has_value());
    CHECK(got->side == expect->side);
    CHECK(got->side == doctest::Approx(0.5));  // sits in the [1/4, 1/2] band
  }
}

TEST_CASE("closeness coefficient triple laws over the sweep") {
  auto st = sweeps::kq_triple_sweep(200, 77);
  CHECK(st.monotone_violations == 0);
  CHECK(st.max_c_rs <= fixture_cap("kq1_rs_over_qs_C"));
  CHECK(st.max_c_qs <= fixture_cap("kq1_qs_over_sum_C"));
}

TEST_CASE("comparable sizes keep the coefficient small") {
  // l(R) <= 2 l(Q) allows at most one dilation term of size <= 2^n C0
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    DiscreteMeasure mu = sweeps::sweep_measure(900 + t, t);
    AnalysisContext ctx = AnalysisContext::for_dimension(1, mu.dimension());
    double c0 = growth_constant(mu, ctx);
    std::uniform_int_distribution<Eigen::Index> pick(0, mu.size() - 1);
    std::uniform_real_distribution<double> unif(1.0, 2.0);
    Eigen::VectorXd x = mu.point(pick(rng));
    double lq = mu.r_min() * (1.0 + 3.0 * unif(rng));
    double lr = lq * unif(rng);
    double k = k_coeff(mu, ctx, NestedCubePair(Cube(x, lq), Cube(x, lr)));
    CHECK(k <= 1.0 + 2.0 * c0 * std::pow(2.0, ctx.n));
  }
}

TEST_CASE("fast outward mass growth keeps the coefficient bounded") {
  // Intermediate dilates all fail (2, beta)-doubling; the closed-form bound
  // 1 + C0 + C0 q/(1-q), q = 2^n/beta, from the geometric tail applies.
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    const double beta = 4.0 + 4.0 * unif(rng);  // > 2^n = 2
    const int levels = 6 + static_cast<int>(4 * unif(rng));
    std::vector<double> xs{0.0}, ms{1.0};
    double mass = 1.0;
    for (int k = 1; k < levels; ++k) {
      mass *= 2.0 * beta;  // ring mass ratio safely above beta
      xs.push_back(0.45 * std::ldexp(1.0, k));
      ms.push_back(mass);
    }
    auto mu = line_measure(xs, ms, 0.25);
    AnalysisContext ctx = AnalysisContext::for_dimension(1, 1);
    Cube q = cube1(0.0, 1.0);
    // verify the construction: intermediate dilates are non-doubling
    for (int k = 1; k < levels - 1; ++k)
      CHECK_FALSE(is_doubling(mu, q.dilated(std::ldexp(1.0, k)), 2.0, beta));
    const double c0 = growth_constant(mu, ctx);
    const double qq = std::pow(2.0, ctx.n) / beta;
    const double bound = 1.0 + c0 + c0 * qq / (1.0 - qq);
    double k_val =
        k_coeff(mu, ctx, NestedCubePair(q, q.dilated(std::ldexp(1.0, levels))));
    CHECK(k_val <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("slow mass growth keeps the coefficient bounded") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    const double beta = 1.2 + 0.6 * unif(rng);  // < 2^n = 2
    const int levels = 8 + static_cast<int>(6 * unif(rng));
    // mu(2^k Q) = beta^k exactly: ring masses beta^(k-1) (beta - 1)
    std::vector<double> xs{0.0}, ms{1.0};
    for (int k = 1; k <= levels; ++k) {
      xs.push_back(0.45 * std::ldexp(1.0, k));
      ms.push_back(std::pow(beta, k - 1) * (beta - 1.0));
    }
    auto mu = line_measure(xs, ms, 0.25);
    AnalysisContext ctx = AnalysisContext::for_dimension(1, 1);
    Cube q = cube1(0.0, 1.0);
    for (int k = 1; k <= levels; ++k) {
      double expected = std::pow(beta, k);
      CHECK(cube_mass(mu, q.dilated(std::ldexp(1.0, k))) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
    const double c0 = growth_constant(mu, ctx);
    const double qq = beta / std::pow(2.0, ctx.n);
    const double bound = 1.0 + c0 * qq / (1.0 - qq);
    double k_val =
        k_coeff(mu, ctx, NestedCubePair(q, q.dilated(std::ldexp(1.0, levels))));
    CHECK(k_val <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("chains of far-apart cubes telescope") {
  double worst = sweeps::pok0_sweep(10, 303);
  CHECK(worst > 0.0);  // the sweep found usable chains
  CHECK(worst <= fixture_cap("pok0_C17"));
}
