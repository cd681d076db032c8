#pragma once

#include <functional>
#include <optional>

#include "nonhom/measure.hpp"

namespace nonhom {

/// A pair of cubes with certified containment (inner inside outer, per
/// coordinate). Construction throws NotNested otherwise.
struct NestedCubePair {
  Cube inner;
  Cube outer;

  NestedCubePair(Cube q, Cube r) : inner(std::move(q)), outer(std::move(r)) {
    if (!outer.contains_cube(inner))
      fail(ErrorCode::NotNested, "inner cube is not contained in outer cube");
  }
};

/// Smallest integer k >= 0 with 2^k * l(Q) >= l(R). Zero when l(Q) >= l(R),
/// so that the closeness coefficient of a cube with itself is exactly 1.
int n_steps(const NestedCubePair& pair);

/// Smallest integer j with 2^j >= v (v > 0).
int dyadic_level_ceil(double v);

/// Closeness coefficient K_{Q,R} = 1 + sum_{k=1..N} mu(2^k Q) / l(2^k Q)^n
/// with N = n_steps(pair).
double k_coeff(const DiscreteMeasure& mu, const AnalysisContext& ctx,
               const NestedCubePair& pair);

/// Grid-free radial variant: 1 + sum over support points y with
/// l(Q) <= |y - x_Q| <= l(R) of mass(y) / |y - x_Q|^n.
double k_coeff_radial(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                      const NestedCubePair& pair);

/// (alpha, beta)-doubling test: mu(alpha Q) <= beta * mu(Q).
/// A zero-mass cube counts as doubling iff its dilate also has zero mass.
bool is_doubling(const DiscreteMeasure& mu, const Cube& q, double alpha, double beta);

/// Smallest 2^N-dilate of Q (N >= 0) that is (2, beta_d)-doubling. Terminates
/// because dilates eventually swallow the support, after which the mass is
/// constant.
Cube doubling_companion(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                        const Cube& q);

/// Smallest alpha^k-dilate, k >= k_min, that is (alpha, beta)-doubling.
Cube doubling_companion_general(const DiscreteMeasure& mu, const Cube& q,
                                double alpha, double beta, int k_min);

/// Scans sides scale * 2^-k (k = 0, 1, ...) down to r_min and returns the
/// largest (2, beta_d)-doubling cube centered at x satisfying the predicate.
/// Returns nullopt when no scale qualifies.
std::optional<Cube> largest_doubling_below(
    const DiscreteMeasure& mu, const AnalysisContext& ctx,
    const Eigen::Ref<const Eigen::VectorXd>& x, double scale,
    const std::function<bool(const Cube&)>& predicate = nullptr);

}  // namespace nonhom
