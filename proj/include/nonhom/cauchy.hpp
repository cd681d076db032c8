#pragma once

#include <complex>

#include "nonhom/family.hpp"

namespace nonhom {

/// d = 2, n = 1 view of a measure: point (a, b) read as a + ib.
/// Construction checks the dimension.
class PlanarMeasure {
 public:
  explicit PlanarMeasure(const DiscreteMeasure& mu);

  const DiscreteMeasure& measure() const { return *mu_; }
  const ComplexFunction& z() const { return z_; }
  Eigen::Index size() const { return mu_->size(); }
  double mass(Eigen::Index i) const { return mu_->mass(i); }

 private:
  const DiscreteMeasure* mu_;
  ComplexFunction z_;
};

/// Strictly decreasing truncation radii, all >= r_min of the target measure.
struct TruncationGrid {
  std::vector<double> epsilons;

  static TruncationGrid validated(std::vector<double> eps, double r_min);
};

/// Truncated Cauchy transform at x: sum over |x - z_y| > eps of
/// f(y) mass(y) / (x - z_y).
std::complex<double> cauchy_truncated(const PlanarMeasure& pm, const ComplexFunction& f,
                                      double eps, std::complex<double> x);

/// Transform evaluated at every support point (the point itself is excluded
/// by the truncation).
ComplexFunction cauchy_truncated_all(const PlanarMeasure& pm, const ComplexFunction& f,
                                     double eps);

/// Menger curvature: 4 Area / product of side lengths (inverse circumradius).
/// Throws CoincidentPoints when two points coincide.
double menger_curvature(const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                        const Eigen::Vector2d& z);

/// Melnikov permutation sum: sum over the six orderings (i, j, k) of
/// 1 / ((z_i - z_k) * conj(z_j - z_k)). Equals the squared Menger curvature;
/// the normalization is pinned by a brute-force test, not assumed.
double melnikov_permutation_sum(std::complex<double> z1, std::complex<double> z2,
                                std::complex<double> z3);

/// Sum over ordered triples of support points in Q with pairwise distances
/// > eps of c(x,y,z)^2 a(y) a(z) m(x) m(y) m(z); a == 1 when absent.
/// Unordered enumeration with the symmetry factor, pairwise-summed partials
/// combined in fixed order (thread-count independent).
double curvature_triple_sum(const PlanarMeasure& pm, const Cube& q, double eps,
                            const RealFunction* a = nullptr);

struct T1Row {
  double side = 0.0;
  double eps = 0.0;
  double ratio = 0.0;
};

struct T1Report {
  double sup = 0.0;
  Cube witness;
  double witness_eps = 0.0;
  std::vector<T1Row> table;
};

/// For each (square, eps): int_Q |C_eps chi_Q|^2 dmu / mu(2Q).
T1Report t1_report(const PlanarMeasure& pm, const std::vector<Cube>& squares,
                   const TruncationGrid& grid);

struct UniformL1Report {
  double sup = 0.0;
  int witness_function = -1;
  double witness_eps = 0.0;
  std::vector<T1Row> table;  ///< side, eps, ratio rows (max over functions per cube)
};

struct CubeTestFunction {
  int cube_index = -1;   ///< into the squares list
  RealFunction values;   ///< supported on that cube, sup norm <= 1
};

/// sup over (Q, a, eps) of int_Q |C_eps a| dmu / (||a||_inf mu(rho Q)).
UniformL1Report uniform_l1_check(const PlanarMeasure& pm, const AnalysisContext& ctx,
                                 const std::vector<Cube>& squares,
                                 const TruncationGrid& grid,
                                 const std::vector<CubeTestFunction>& test_functions);

/// Commutator [b, C_eps] f at support point x: b(x) C_eps f(x) - C_eps(b f)(x).
/// Throws NotInSupport when x is not a support point.
std::complex<double> commutator(const PlanarMeasure& pm, const RealFunction& b,
                                const ComplexFunction& f, double eps,
                                std::complex<double> x);

/// Commutator at every support point.
ComplexFunction commutator_all(const PlanarMeasure& pm, const RealFunction& b,
                               const ComplexFunction& f, double eps);

/// T_*: per-point max of |C_eps f| over the finite grid (a lower bound of the
/// analytic sup over all eps).
RealFunction cauchy_star_all(const PlanarMeasure& pm, const ComplexFunction& f,
                             const TruncationGrid& grid);

/// Cubes with pairwise distinct support sets (same side, mass and contained
/// index range count as duplicates; dilates of a swallowed support collapse).
std::vector<Cube> dedup_by_support(const DiscreteMeasure& mu,
                                   const std::vector<Cube>& cubes);

/// Optional diagnostic for the commutator sharp bound: per support point the
/// sharp maximal of |[b, C_eps] f| against the majorant
/// M_{p,(9/8)} f + M_{p,(3/2)}(C_eps f) + T_* f, on the shared family.
struct CommutatorDiagnostic {
  RealFunction sharp_of_commutator;
  RealFunction majorant;
  double max_ratio = 0.0;  ///< over points with positive majorant
};
CommutatorDiagnostic commutator_sharp_diagnostic(const CubeFamily& family,
                                                 const RealFunction& b,
                                                 const ComplexFunction& f, double p,
                                                 const TruncationGrid& grid);

/// Both sides of the curvature identity for a supported on Q:
///   lhs = 2 int_Q |C_eps a|^2 dmu + 4 Re int_Q a C_eps(a) conj(C_eps chi_Q) dmu
///   rhs = triple sum of c^2 a(y) a(z)
/// The difference is the remainder bounded by C ||a||_inf^2 mu(2Q).
struct CurvatureIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double remainder = 0.0;
};
CurvatureIdentity curvature_transform_identity(const PlanarMeasure& pm, const Cube& q,
                                               double eps, const RealFunction& a);

}  // namespace nonhom
