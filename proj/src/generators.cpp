#include "nonhom/generators.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace nonhom {

DiscreteMeasure make_segment(int n_points) {
  if (n_points < 2) fail(ErrorCode::InvalidInput, "segment needs at least 2 points");
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n_points, 2);
  for (int k = 0; k < n_points; ++k)
    pts(k, 0) = static_cast<double>(k) / (n_points - 1);
  Eigen::VectorXd masses =
      Eigen::VectorXd::Constant(n_points, 1.0 / n_points);
  return DiscreteMeasure(pts, masses, 1.0 / n_points);
}

DiscreteMeasure make_square(int n_side) {
  if (n_side < 2) fail(ErrorCode::InvalidInput, "square needs at least a 2x2 grid");
  const int n = n_side * n_side;
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n_side; ++i)
    for (int j = 0; j < n_side; ++j) {
      pts(i * n_side + j, 0) = static_cast<double>(i) / (n_side - 1);
      pts(i * n_side + j, 1) = static_cast<double>(j) / (n_side - 1);
    }
  Eigen::VectorXd masses = Eigen::VectorXd::Constant(n, 1.0 / n);
  return DiscreteMeasure(pts, masses, 1.0 / n_side);
}

DiscreteMeasure make_eps_weighted(double h, double eps) {
  if (!(h > 0.0) || !(eps > 0.0))
    fail(ErrorCode::InvalidInput, "eps_weighted needs positive h and eps");
  struct Interval {
    double a, b, density;
  };
  const Interval parts[] = {{-2.0, -1.0, 1.0}, {-0.5, 0.5, eps}, {1.0, 2.0, 1.0}};
  std::vector<double> xs, ms;
  for (const auto& part : parts) {
    const int cells = static_cast<int>(std::round((part.b - part.a) / h));
    for (int k = 0; k < cells; ++k) {
      xs.push_back(part.a + (k + 0.5) * h);
      ms.push_back(h * part.density);
    }
  }
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(static_cast<int>(xs.size()), 2);
  Eigen::VectorXd masses(static_cast<int>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts(static_cast<int>(i), 0) = xs[i];
    masses[static_cast<int>(i)] = ms[i];
  }
  return DiscreteMeasure(pts, masses, h / 2.0);
}

DiscreteMeasure make_cantor4(int generation) {
  if (generation < 1 || generation > 10)
    fail(ErrorCode::InvalidInput, "cantor4 generation must be in [1, 10]");
  const int n = 1 << (2 * generation);  // 4^G
  Eigen::MatrixXd pts(n, 2);
  for (int code = 0; code < n; ++code) {
    double x = 0.0, y = 0.0, scale = 1.0;
    int c = code;
    for (int g = 1; g <= generation; ++g) {
      scale /= 4.0;
      x += 3.0 * scale * (c & 1);
      y += 3.0 * scale * ((c >> 1) & 1);
      c >>= 2;
    }
    pts(code, 0) = x;
    pts(code, 1) = y;
  }
  Eigen::VectorXd masses = Eigen::VectorXd::Constant(n, std::pow(4.0, -generation));
  return DiscreteMeasure(pts, masses, std::pow(4.0, -generation));
}

RealFunction make_step_pair_function(const DiscreteMeasure& mu, double eps) {
  RealFunction f = RealFunction::Zero(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double x = mu.points()(i, 0);
    if (x >= 0.25 && x <= 0.5) f[i] = 1.0 / eps;
    else if (x >= -0.5 && x <= -0.25) f[i] = -1.0 / eps;
  }
  return f;
}

RealFunction make_gaussian_function(const DiscreteMeasure& mu, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealFunction f(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) f[i] = normal(rng);
  return f;
}

RealFunction make_bumps_function(const DiscreteMeasure& mu, std::uint64_t seed,
                                 int n_bumps, double sigma_min, double sigma_max,
                                 double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, mu.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealFunction f = RealFunction::Zero(mu.size());
  for (int b = 0; b < n_bumps; ++b) {
    const Eigen::VectorXd c = mu.point(pick(rng));
    const double sigma = sigma_min + (sigma_max - sigma_min) * unif(rng);
    const double amp = amplitude * (0.5 + unif(rng)) * (unif(rng) < 0.5 ? -1.0 : 1.0);
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      const double d2 = (mu.point(i) - c).squaredNorm();
      f[i] += amp * std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return f;
}

RealFunction make_spike_function(const DiscreteMeasure& mu, double height) {
  RealFunction f = RealFunction::Zero(mu.size());
  f[0] = height;
  return f;
}

DiscreteMeasure make_random_clusters(std::uint64_t seed, int n_points, int d) {
  if (n_points < 2 || d < 1)
    fail(ErrorCode::InvalidInput, "random_clusters needs n_points >= 2, d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int n_clusters = std::max(1, static_cast<int>(std::sqrt(n_points)));
  Eigen::MatrixXd centers(n_clusters, d);
  Eigen::VectorXd radii(n_clusters);
  for (int c = 0; c < n_clusters; ++c) {
    for (int t = 0; t < d; ++t) centers(c, t) = unif(rng);
    radii[c] = std::pow(2.0, -1.0 - 5.0 * unif(rng));
  }
  Eigen::MatrixXd pts(n_points, d);
  Eigen::VectorXd masses(n_points);
  for (int i = 0; i < n_points; ++i) {
    const int c = static_cast<int>(unif(rng) * n_clusters) % n_clusters;
    for (int t = 0; t < d; ++t)
      pts(i, t) = centers(c, t) + radii[c] * (unif(rng) - 0.5);
    masses[i] = std::pow(10.0, -3.0 * unif(rng));
  }
  // Resolution: half the minimal pairwise gap (floored), so dyadic scans can
  // isolate single points.
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_points; ++i)
    for (int j = i + 1; j < n_points; ++j) {
      const double g = (pts.row(i) - pts.row(j)).norm();
      if (g > 0.0) min_gap = std::min(min_gap, g);
    }
  if (!std::isfinite(min_gap) || min_gap == 0.0) {
    // Duplicate draw (astronomically unlikely): jitter deterministically.
    for (int i = 0; i < n_points; ++i) pts(i, 0) += i * 1e-12;
    min_gap = 1e-12;
  }
  const double r_min = std::max(min_gap / 2.0, 1e-9);
  return DiscreteMeasure(pts, masses, r_min);
}

}  // namespace nonhom
