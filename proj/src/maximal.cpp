#include "nonhom/maximal.hpp"

#include <cmath>

namespace nonhom {

namespace {

// Applies per-cube values as a running max over the points inside each cube.
template <class PerCube>
RealFunction spread_max(const CubeFamily& fam, PerCube&& value_of,
                        bool doubling_only = false) {
  const auto& mu = fam.measure();
  RealFunction out = RealFunction::Zero(mu.size());
  for (int i = 0; i < fam.size(); ++i) {
    if (doubling_only && !fam.is_doubling_cube(i)) continue;
    const double v = value_of(i);
    for_each_in_cube(mu, fam.cube(i), [&](Eigen::Index j) {
      if (v > out[j]) out[j] = v;
    });
  }
  return out;
}

Eigen::Index require_support_index(const DiscreteMeasure& mu,
                                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::Index i = mu.find_point(x);
  if (i < 0) fail(ErrorCode::NotInSupport, "query point is not a support point");
  return i;
}

}  // namespace

RealFunction sharp_maximal_batch(const CubeFamily& family, const RealFunction& f) {
  const auto& mu = family.measure();
  std::vector<double> means(family.size());
  for (int i = 0; i < family.size(); ++i) {
    CubeIntegral acc = integrate_on_cube(mu, f, family.cube(i));
    means[i] = acc.weighted / acc.mass;
  }
  RealFunction osc = spread_max(family, [&](int i) {
    const Cube& q = family.cube(i);
    double denom = cube_mass(mu, q.dilated(1.5));
    double s = 0.0;
    const double c = means[family.companion(i)];
    for_each_in_cube(mu, q, [&](Eigen::Index j) {
      s += std::abs(f[j] - c) * mu.mass(j);
    });
    return s / denom;
  });
  // Pair term: only pairs whose inner cube contains the point matter.
  for (const PairRef& pr : family.doubling_pairs()) {
    double v = std::abs(means[pr.inner] - means[pr.outer]) / pr.k;
    for_each_in_cube(mu, family.cube(pr.inner), [&](Eigen::Index j) {
      if (v > osc[j]) osc[j] = v;
    });
  }
  return osc;
}

RealFunction doubling_maximal_batch(const CubeFamily& family, const RealFunction& f) {
  const auto& mu = family.measure();
  RealFunction absf = f.abs();
  return spread_max(
      family,
      [&](int i) {
        CubeIntegral acc = integrate_on_cube(mu, absf, family.cube(i));
        return acc.weighted / acc.mass;
      },
      /*doubling_only=*/true);
}

RealFunction radial_maximal_batch(const CubeFamily& family, const RealFunction& f,
                                  double rho) {
  const auto& mu = family.measure();
  RealFunction absf = f.abs();
  return spread_max(family, [&](int i) {
    const Cube& q = family.cube(i);
    CubeIntegral acc = integrate_on_cube(mu, absf, q);
    return acc.weighted / cube_mass(mu, q.dilated(rho));
  });
}

RealFunction p_maximal_batch(const CubeFamily& family, const RealFunction& f,
                             double p, double eta) {
  if (p < 1.0) fail(ErrorCode::InvalidInput, "p_maximal requires p >= 1");
  const auto& mu = family.measure();
  return spread_max(family, [&](int i) {
    const Cube& q = family.cube(i);
    double s = 0.0;
    for_each_in_cube(mu, q, [&](Eigen::Index j) {
      s += std::pow(std::abs(f[j]), p) * mu.mass(j);
    });
    return std::pow(s / cube_mass(mu, q.dilated(eta)), 1.0 / p);
  });
}

double sharp_maximal(const CubeFamily& family, const RealFunction& f,
                     const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::Index i = require_support_index(family.measure(), x);
  return sharp_maximal_batch(family, f)[i];
}

double doubling_maximal(const CubeFamily& family, const RealFunction& f,
                        const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::Index i = require_support_index(family.measure(), x);
  return doubling_maximal_batch(family, f)[i];
}

double radial_maximal(const CubeFamily& family, const RealFunction& f,
                      const Eigen::Ref<const Eigen::VectorXd>& x, double rho) {
  Eigen::Index i = require_support_index(family.measure(), x);
  return radial_maximal_batch(family, f, rho)[i];
}

double p_maximal(const CubeFamily& family, const RealFunction& f,
                 const Eigen::Ref<const Eigen::VectorXd>& x, double p, double eta) {
  Eigen::Index i = require_support_index(family.measure(), x);
  return p_maximal_batch(family, f, p, eta)[i];
}

double lp_norm(const DiscreteMeasure& mu, const RealFunction& v, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    s += std::pow(std::abs(v[i]), p) * mu.mass(i);
  return std::pow(s, 1.0 / p);
}

}  // namespace nonhom
