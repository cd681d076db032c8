#include "nonhom/cubes.hpp"

#include <cmath>

namespace nonhom {

int n_steps(const NestedCubePair& pair) {
  if (pair.inner.side >= pair.outer.side) return 0;
  int k = 0;
  double s = pair.inner.side;
  while (s < pair.outer.side) {
    s *= 2.0;
    ++k;
  }
  return k;
}

int dyadic_level_ceil(double v) {
  int j = static_cast<int>(std::ceil(std::log2(v)));
  while (std::ldexp(1.0, j) < v) ++j;
  while (std::ldexp(1.0, j - 1) >= v) --j;
  return j;
}

double k_coeff(const DiscreteMeasure& mu, const AnalysisContext& ctx,
               const NestedCubePair& pair) {
  const int steps = n_steps(pair);
  double acc = 1.0;
  double side = pair.inner.side;
  for (int k = 1; k <= steps; ++k) {
    side *= 2.0;
    acc += cube_mass(mu, Cube(pair.inner.center, side)) / std::pow(side, ctx.n);
  }
  return acc;
}

double k_coeff_radial(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                      const NestedCubePair& pair) {
  const double lo = pair.inner.side, hi = pair.outer.side;
  const auto& pts = mu.points();
  const Eigen::VectorXd c = pair.inner.center;
  thread_local std::vector<Eigen::Index> scratch;
  mu.candidates_in_slab(c[0] - hi, c[0] + hi, scratch);
  double acc = 1.0;
  for (Eigen::Index i : scratch) {
    double r = (pts.row(i).transpose() - c).norm();
    if (r >= lo && r <= hi) acc += mu.mass(i) / std::pow(r, ctx.n);
  }
  return acc;
}

bool is_doubling(const DiscreteMeasure& mu, const Cube& q, double alpha, double beta) {
  const double m = cube_mass(mu, q);
  const double md = cube_mass(mu, q.dilated(alpha));
  if (m == 0.0) return md == 0.0;
  return md <= beta * m;
}

Cube doubling_companion_general(const DiscreteMeasure& mu, const Cube& q,
                                double alpha, double beta, int k_min) {
  Cube cur = k_min == 0 ? q : q.dilated(std::pow(alpha, k_min));
  // Once the cube swallows the support the mass is constant and the test
  // passes; bound the scan accordingly.
  const double stop = 2.0 * alpha *
                      (mu.support_diameter() + q.side +
                       (mu.points().row(0).transpose() - q.center).norm());
  while (true) {
    double m = cube_mass(mu, cur);
    double md = cube_mass(mu, cur.dilated(alpha));
    bool ok = (m == 0.0) ? (md == 0.0) : (md <= beta * m);
    if (ok) return cur;
    if (cur.side > stop)
      fail(ErrorCode::InvalidInput, "doubling companion scan did not terminate");
    cur.side *= alpha;
  }
}

Cube doubling_companion(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                        const Cube& q) {
  return doubling_companion_general(mu, q, 2.0, effective_beta_d(mu, ctx), 0);
}

std::optional<Cube> largest_doubling_below(
    const DiscreteMeasure& mu, const AnalysisContext& ctx,
    const Eigen::Ref<const Eigen::VectorXd>& x, double scale,
    const std::function<bool(const Cube&)>& predicate) {
  const double beta = effective_beta_d(mu, ctx);
  for (double side = scale; side >= mu.r_min(); side /= 2.0) {
    Cube q(x, side);
    if (!is_doubling(mu, q, 2.0, beta)) continue;
    if (predicate && !predicate(q)) continue;
    return q;
  }
  return std::nullopt;
}

}  // namespace nonhom
