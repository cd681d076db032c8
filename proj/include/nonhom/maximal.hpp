#pragma once

#include "nonhom/family.hpp"

namespace nonhom {

/// Pointwise maximal operators over a shared cube family, evaluated at every
/// support point in one batch. Pointwise claims are only meaningful when both
/// sides use the same family; the batch API makes that explicit.

/// M^sharp: non-centered oscillation against mu(3Q/2) plus K-normalized mean
/// differences over doubling pairs containing the point (K <= P0 pairs only).
RealFunction sharp_maximal_batch(const CubeFamily& family, const RealFunction& f);

/// N: sup of m_Q(|f|) over doubling cubes containing the point.
RealFunction doubling_maximal_batch(const CubeFamily& family, const RealFunction& f);

/// M_(rho): sup of (1/mu(rho Q)) int_Q |f| over cubes containing the point.
RealFunction radial_maximal_batch(const CubeFamily& family, const RealFunction& f,
                                  double rho);

/// M_{p,(eta)}: sup of ((1/mu(eta Q)) int_Q |f|^p)^(1/p).
RealFunction p_maximal_batch(const CubeFamily& family, const RealFunction& f,
                             double p, double eta);

/// Single-point evaluations; x must be a support point (NotInSupport otherwise).
double sharp_maximal(const CubeFamily& family, const RealFunction& f,
                     const Eigen::Ref<const Eigen::VectorXd>& x);
double doubling_maximal(const CubeFamily& family, const RealFunction& f,
                        const Eigen::Ref<const Eigen::VectorXd>& x);
double radial_maximal(const CubeFamily& family, const RealFunction& f,
                      const Eigen::Ref<const Eigen::VectorXd>& x, double rho);
double p_maximal(const CubeFamily& family, const RealFunction& f,
                 const Eigen::Ref<const Eigen::VectorXd>& x, double p, double eta);

/// Discrete L^p norm over the support: (sum |v_i|^p m_i)^(1/p).
double lp_norm(const DiscreteMeasure& mu, const RealFunction& v, double p);

}  // namespace nonhom
