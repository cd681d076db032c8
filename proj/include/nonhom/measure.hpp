#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nonhom/common.hpp"

namespace nonhom {

using RealFunction = Eigen::ArrayXd;     ///< one real value per support point
using ComplexFunction = Eigen::ArrayXcd; ///< one complex value per support point

/// Closed axis-parallel cube, given by center and side length.
/// Dilation by s maps (center, side) to (center, s*side).
struct Cube {
  Eigen::VectorXd center;
  double side = 0.0;

  Cube() = default;
  Cube(Eigen::VectorXd c, double s) : center(std::move(c)), side(s) {}

  Cube dilated(double s) const { return Cube(center, side * s); }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const double h = side / 2.0;
    for (Eigen::Index t = 0; t < center.size(); ++t)
      if (std::abs(x[t] - center[t]) > h) return false;
    return true;
  }

  /// Per-coordinate interval containment (closed cubes).
  bool contains_cube(const Cube& inner) const {
    if (inner.side > side) return false;
    const double gap = (side - inner.side) / 2.0;
    for (Eigen::Index t = 0; t < center.size(); ++t)
      if (std::abs(inner.center[t] - center[t]) > gap) return false;
    return true;
  }
};

/// Analysis parameters: growth degree n, oscillation dilation rho, doubling
/// threshold beta_d, and the regularity-check cap P0.
///
/// P0 <= 0 means "use the computed default" max(4, 8 * C0 * 2^n), where C0 is
/// the growth constant of the measure under inspection.
struct AnalysisContext {
  int n = 1;
  double rho = 2.0;
  double beta_d = 0.0;  // 0 means default 2^(d+1)
  double p0 = 0.0;      // <=0 means computed default

  static AnalysisContext for_dimension(int n, int d) {
    AnalysisContext ctx;
    ctx.n = n;
    ctx.beta_d = std::pow(2.0, d + 1);
    return ctx;
  }
};

/// Finitely supported measure in R^d with a resolution scale r_min.
///
/// The point masses stand in for a continuous measure observed at resolution
/// r_min: growth certificates are only meaningful for radii >= r_min and all
/// cube families keep side >= r_min. Immutable after construction and safe to
/// share across threads; all operations on it are pure.
class DiscreteMeasure {
 public:
  /// points: one row per support point (N x d); masses: strictly positive,
  /// one per point. Throws InvalidInput on malformed data (nonpositive mass,
  /// duplicate points, bad r_min).
  DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd masses, double r_min);

  int dimension() const { return static_cast<int>(points_.cols()); }
  Eigen::Index size() const { return points_.rows(); }
  double r_min() const { return r_min_; }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& masses() const { return masses_; }
  Eigen::VectorXd point(Eigen::Index i) const { return points_.row(i); }
  double mass(Eigen::Index i) const { return masses_[i]; }
  double total_mass() const { return total_mass_; }

  /// Index of the support point equal to x (exact match), or -1.
  Eigen::Index find_point(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Candidate original indices, ascending, whose first coordinate lies in
  /// [lo, hi]. Superset of any axis-aligned query intersected with that slab;
  /// iterating candidates in ascending index order and skipping non-members
  /// reproduces naive enumeration bit for bit.
  void candidates_in_slab(double lo, double hi, std::vector<Eigen::Index>& out) const;

  /// Max pairwise distance of the support (cached).
  double support_diameter() const;

  /// Half the side of the smallest axis-parallel cube centered at point i
  /// containing the whole support (max L-inf distance from point i).
  double enclosing_radius(Eigen::Index i) const;

 private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd masses_;
  double r_min_ = 0.0;
  double total_mass_ = 0.0;

  std::vector<Eigen::Index> order_by_x0_;  // permutation sorting coordinate 0
  Eigen::VectorXd sorted_x0_;
  bool x0_sorted_identity_ = false;

  struct Caches {
    std::mutex mutex;
    double diameter = -1.0;
    std::map<int, double> growth;  // n -> C0
  };
  std::unique_ptr<Caches> caches_ = std::make_unique<Caches>();

  friend double growth_constant(const DiscreteMeasure&, const AnalysisContext&);
};

/// Mass of the closed Euclidean ball B(x, r). Accumulates in ascending
/// support-point index order.
double ball_mass(const DiscreteMeasure& mu, const Eigen::Ref<const Eigen::VectorXd>& x,
                 double r);

/// Mass of the closed cube (per-coordinate membership).
double cube_mass(const DiscreteMeasure& mu, const Cube& q);

/// Ascending-index iteration over support points inside the closed cube.
/// The callback must not issue further measure queries (a shared scratch
/// buffer backs the candidate walk).
template <class F>
void for_each_in_cube(const DiscreteMeasure& mu, const Cube& q, F&& f) {
  thread_local std::vector<Eigen::Index> scratch;
  const double h = q.side / 2.0;
  mu.candidates_in_slab(q.center[0] - h, q.center[0] + h, scratch);
  const auto& pts = mu.points();
  const int d = mu.dimension();
  for (Eigen::Index i : scratch) {
    bool inside = true;
    for (int t = 1; t < d; ++t)
      if (std::abs(pts(i, t) - q.center[t]) > h) { inside = false; break; }
    if (inside) f(i);
  }
}

/// Sum of f*mass and mass over the cube in one pass.
struct CubeIntegral {
  double weighted = 0.0;  // integral of f d(mu) over the cube
  double mass = 0.0;      // mu(Q)
};
CubeIntegral integrate_on_cube(const DiscreteMeasure& mu, const RealFunction& f,
                               const Cube& q);

/// m_Q(f): mean of f over the cube. Throws EmptyCube when mu(Q) = 0.
double mean(const DiscreteMeasure& mu, const RealFunction& f, const Cube& q);

/// Max pairwise distance of the support. Throws EmptySupport.
double support_diameter(const DiscreteMeasure& mu);

/// Growth constant C0 = max over support points x and candidate radii r of
/// ball_mass(x, r) / r^n, with candidates {r_min} and all point distances
/// >= r_min. The max over all r >= r_min is attained on this set because
/// ball mass is a right-continuous step function of r. Cached per n.
double growth_constant(const DiscreteMeasure& mu, const AnalysisContext& ctx);

/// Effective beta_d: ctx.beta_d, or the default 2^(d+1).
double effective_beta_d(const DiscreteMeasure& mu, const AnalysisContext& ctx);

/// Effective regularity cap P0: ctx.p0 if positive, else max(4, 8*C0*2^n).
double effective_p0(const DiscreteMeasure& mu, const AnalysisContext& ctx);

}  // namespace nonhom
