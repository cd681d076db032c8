#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nonhom/family.hpp"

namespace nonhom {

/// Result of a norm sweep over a finite cube family. The value is a certified
/// lower bound of the analytic supremum; the witness is the cube (or nested
/// pair) attaining it.
struct NormReport {
  double value = 0.0;
  double osc_component = 0.0;  ///< oscillation part of the max
  double reg_component = 0.0;  ///< mean-regularity part of the max
  Cube witness_inner;
  Cube witness_outer;          ///< set only when the witness is a pair
  bool witness_is_pair = false;
  int family_size = 0;
};

/// sup over the family of (1/mu(rho Q)) * int_Q |f - m_Q f| dmu.
NormReport bmo_rho(const CubeFamily& family, const RealFunction& f, double rho);

/// Regular BMO estimator: max of the oscillation term with centers m_{Q~} f
/// and the K-normalized mean differences over doubling pairs.
NormReport rbmo_star(const CubeFamily& family, const RealFunction& f);

/// Same sweep with candidate numbers f_Q = m_{Q~} f in both conditions and
/// pairs not restricted to doubling cubes.
NormReport rbmo_doublestar(const CubeFamily& family, const RealFunction& f);

/// Median-based variant: oscillation around alpha_{Q~}(f) against mu(2Q) and
/// median differences over doubling pairs.
NormReport circ_norm(const CubeFamily& family, const RealFunction& f);

/// p-mean version of the rbmo_star oscillation term (same regularity term).
/// p = 1 reproduces rbmo_star exactly.
NormReport rbmo_p(const CubeFamily& family, const RealFunction& f, double p);

/// Characterization with plain means and mass-ratio weighted regularity
/// (the intermediate equivalent form of the norm).
NormReport fifi_b_value(const CubeFamily& family, const RealFunction& f);

/// Lower weighted median of f on Q: the smallest support value v in Q with
/// mu{f < v} <= mu(Q)/2 and mu{f > v} <= mu(Q)/2; it minimizes m_Q(|f - a|).
double alpha_median(const DiscreteMeasure& mu, const RealFunction& f, const Cube& q);

/// Sign-preserving clamp of f at height q.
RealFunction truncate(const RealFunction& f, double q);

/// Distribution tail rows (lambda, mu{x in Q : |f - m_{Q~} f| > lambda} / mu(rho Q)).
std::vector<std::pair<double, double>> jn_tail(const DiscreteMeasure& mu,
                                               const AnalysisContext& ctx,
                                               const RealFunction& f, const Cube& q,
                                               const std::vector<double>& lambdas);

/// Atomic block: envelope cube R and pieces lambda_j * a_j with supp(a_j)
/// inside Q_j, sum integrating to zero, and the size bound
/// ||a_j||_inf <= (mu(rho Q_j) K_{Q_j,R})^-1.
struct AtomicBlock {
  struct Piece {
    double lambda = 0.0;
    RealFunction a;
    Cube cube;
  };
  Cube envelope;
  std::vector<Piece> pieces;
};

/// Sum of lambda_j a_j as a function on the full support.
RealFunction block_function(const DiscreteMeasure& mu, const AtomicBlock& block);

struct BlockValidation {
  bool ok = false;
  double h1 = 0.0;  ///< sum of |lambda_j| when valid
  std::vector<std::string> violations;
};

/// Checks the atomic-block conditions; never silently passes.
/// tol is the relative slack for the zero-integral and size checks.
BlockValidation validate_block(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                               const AtomicBlock& block, double tol = 1e-12);

/// |int b g dmu| / (|b|_H1 * rbmo_star(g)). Throws ZeroNorm when the
/// denominator vanishes but the pairing does not.
double pairing_check(const CubeFamily& family, const AtomicBlock& block,
                     const RealFunction& g);

}  // namespace nonhom
