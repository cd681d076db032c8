#include "nonhom/cauchy.hpp"

#include <algorithm>
#include <cmath>

#include "nonhom/maximal.hpp"
#include "nonhom/parallel.hpp"

namespace nonhom {

PlanarMeasure::PlanarMeasure(const DiscreteMeasure& mu) : mu_(&mu) {
  if (mu.dimension() != 2)
    fail(ErrorCode::InvalidInput, "planar view requires a measure in R^2");
  z_.resize(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    z_[i] = std::complex<double>(mu.points()(i, 0), mu.points()(i, 1));
}

TruncationGrid TruncationGrid::validated(std::vector<double> eps, double r_min) {
  if (eps.empty()) fail(ErrorCode::InvalidInput, "empty truncation grid");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] < r_min)
      fail(ErrorCode::InvalidInput, "truncation radius below the resolution scale");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      fail(ErrorCode::InvalidInput, "truncation radii must be strictly decreasing");
  }
  return TruncationGrid{std::move(eps)};
}

std::complex<double> cauchy_truncated(const PlanarMeasure& pm, const ComplexFunction& f,
                                      double eps, std::complex<double> x) {
  // Below the resolution scale the truncation has no meaning for the modeled
  // continuum; floor it there.
  eps = std::max(eps, pm.measure().r_min());
  std::complex<double> s{0.0, 0.0};
  const auto& z = pm.z();
  for (Eigen::Index i = 0; i < pm.size(); ++i) {
    if (std::abs(x - z[i]) > eps) s += f[i] * pm.mass(i) / (x - z[i]);
  }
  return s;
}

ComplexFunction cauchy_truncated_all(const PlanarMeasure& pm, const ComplexFunction& f,
                                     double eps) {
  const Eigen::Index n = pm.size();
  ComplexFunction out(n);
  parallel::for_chunks(static_cast<std::size_t>(n),
                       [&](int, std::size_t b, std::size_t e) {
                         for (std::size_t i = b; i < e; ++i)
                           out[static_cast<Eigen::Index>(i)] =
                               cauchy_truncated(pm, f, eps, pm.z()[i]);
                       });
  return out;
}

double menger_curvature(const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                        const Eigen::Vector2d& z) {
  const double a = (x - y).norm(), b = (y - z).norm(), c = (z - x).norm();
  if (a == 0.0 || b == 0.0 || c == 0.0)
    fail(ErrorCode::CoincidentPoints, "Menger curvature of coincident points");
  const Eigen::Vector2d u = y - x, v = z - x;
  const double cross = u.x() * v.y() - u.y() * v.x();
  return 2.0 * std::abs(cross) / (a * b * c);  // 4*Area / (abc)
}

double melnikov_permutation_sum(std::complex<double> z1, std::complex<double> z2,
                                std::complex<double> z3) {
  const std::complex<double> z[3] = {z1, z2, z3};
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::complex<double> s{0.0, 0.0};
  for (const auto& p : perms) {
    std::complex<double> d1 = z[p[0]] - z[p[2]];
    std::complex<double> d2 = z[p[1]] - z[p[2]];
    if (d1 == std::complex<double>(0.0, 0.0) || d2 == std::complex<double>(0.0, 0.0))
      fail(ErrorCode::CoincidentPoints, "permutation sum of coincident points");
    s += 1.0 / (d1 * std::conj(d2));
  }
  return s.real();  // the imaginary parts cancel pairwise
}

double curvature_triple_sum(const PlanarMeasure& pm, const Cube& q, double eps,
                            const RealFunction* a) {
  const auto& mu = pm.measure();
  eps = std::max(eps, mu.r_min());
  std::vector<Eigen::Index> idx;
  for_each_in_cube(mu, q, [&](Eigen::Index i) { idx.push_back(i); });
  const std::size_t n = idx.size();
  if (n < 3) return 0.0;

  const auto& z = pm.z();
  const int chunks = parallel::chunk_count(n);
  std::vector<double> partial(chunks, 0.0);
  parallel::for_chunks(n, [&](int c, std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t ii = b; ii < e; ++ii) {
      const Eigen::Index i = idx[ii];
      for (std::size_t jj = ii + 1; jj < n; ++jj) {
        const Eigen::Index j = idx[jj];
        const double dij = std::abs(z[i] - z[j]);
        if (dij <= eps) continue;
        for (std::size_t kk = jj + 1; kk < n; ++kk) {
          const Eigen::Index k = idx[kk];
          if (std::abs(z[i] - z[k]) <= eps || std::abs(z[j] - z[k]) <= eps) continue;
          Eigen::Vector2d xi = mu.points().row(i).transpose(),
                          xj = mu.points().row(j).transpose(),
                          xk = mu.points().row(k).transpose();
          const double c2 = std::pow(menger_curvature(xi, xj, xk), 2);
          const double mmm = mu.mass(i) * mu.mass(j) * mu.mass(k);
          // Sum of a(y) a(z) over the six ordered roles of (x, y, z).
          double sym;
          if (a) {
            const double ai = (*a)[i], aj = (*a)[j], ak = (*a)[k];
            sym = 2.0 * (ai * aj + aj * ak + ai * ak);
          } else {
            sym = 6.0;
          }
          s += c2 * mmm * sym;
        }
      }
    }
    partial[c] = s;
  });
  return parallel::pairwise_sum(partial);
}

T1Report t1_report(const PlanarMeasure& pm, const std::vector<Cube>& squares,
                   const TruncationGrid& grid) {
  if (squares.empty()) fail(ErrorCode::EmptyFamily, "t1_report over empty family");
  const auto& mu = pm.measure();
  T1Report rep;
  for (const Cube& q : squares) {
    std::vector<Eigen::Index> idx;
    for_each_in_cube(mu, q, [&](Eigen::Index i) { idx.push_back(i); });
    const double m2q = cube_mass(mu, q.dilated(2.0));
    for (double eps : grid.epsilons) {
      const std::size_t n = idx.size();
      std::vector<double> partial(std::max(1, parallel::chunk_count(n)), 0.0);
      parallel::for_chunks(n, [&](int c, std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t ii = b; ii < e; ++ii) {
          std::complex<double> v{0.0, 0.0};
          const std::complex<double> x = pm.z()[idx[ii]];
          for (std::size_t jj = 0; jj < n; ++jj) {
            const std::complex<double> y = pm.z()[idx[jj]];
            if (std::abs(x - y) > eps) v += mu.mass(idx[jj]) / (x - y);
          }
          s += std::norm(v) * mu.mass(idx[ii]);
        }
        partial[c] = s;
      });
      const double ratio = parallel::pairwise_sum(partial) / m2q;
      rep.table.push_back({q.side, eps, ratio});
      if (ratio > rep.sup) {
        rep.sup = ratio;
        rep.witness = q;
        rep.witness_eps = eps;
      }
    }
  }
  return rep;
}

UniformL1Report uniform_l1_check(const PlanarMeasure& pm, const AnalysisContext& ctx,
                                 const std::vector<Cube>& squares,
                                 const TruncationGrid& grid,
                                 const std::vector<CubeTestFunction>& test_functions) {
  if (squares.empty() || test_functions.empty())
    fail(ErrorCode::EmptyFamily, "uniform_l1_check over empty family");
  const auto& mu = pm.measure();
  UniformL1Report rep;
  for (std::size_t t = 0; t < test_functions.size(); ++t) {
    const auto& tf = test_functions[t];
    const Cube& q = squares.at(tf.cube_index);
    const double sup_a = tf.values.abs().maxCoeff();
    if (sup_a == 0.0) continue;  // contributes 0
    if (sup_a > 1.0 + 1e-12)
      fail(ErrorCode::InvalidInput, "test function exceeds unit sup norm");
    const double denom = sup_a * cube_mass(mu, q.dilated(ctx.rho));
    ComplexFunction a = tf.values.cast<std::complex<double>>();
    std::vector<Eigen::Index> idx;
    for_each_in_cube(mu, q, [&](Eigen::Index i) { idx.push_back(i); });
    for (double eps : grid.epsilons) {
      double s = 0.0;
      for (Eigen::Index i : idx)
        s += std::abs(cauchy_truncated(pm, a, eps, pm.z()[i])) * mu.mass(i);
      const double ratio = s / denom;
      rep.table.push_back({q.side, eps, ratio});
      if (ratio > rep.sup) {
        rep.sup = ratio;
        rep.witness_function = static_cast<int>(t);
        rep.witness_eps = eps;
      }
    }
  }
  return rep;
}

std::complex<double> commutator(const PlanarMeasure& pm, const RealFunction& b,
                                const ComplexFunction& f, double eps,
                                std::complex<double> x) {
  Eigen::Index i = pm.measure().find_point(Eigen::Vector2d(x.real(), x.imag()));
  if (i < 0) fail(ErrorCode::NotInSupport, "commutator needs a support point");
  ComplexFunction bf = b.cast<std::complex<double>>() * f;
  return b[i] * cauchy_truncated(pm, f, eps, x) - cauchy_truncated(pm, bf, eps, x);
}

ComplexFunction commutator_all(const PlanarMeasure& pm, const RealFunction& b,
                               const ComplexFunction& f, double eps) {
  ComplexFunction bf = b.cast<std::complex<double>>() * f;
  ComplexFunction tf = cauchy_truncated_all(pm, f, eps);
  ComplexFunction tbf = cauchy_truncated_all(pm, bf, eps);
  return b.cast<std::complex<double>>() * tf - tbf;
}

RealFunction cauchy_star_all(const PlanarMeasure& pm, const ComplexFunction& f,
                             const TruncationGrid& grid) {
  RealFunction out = RealFunction::Zero(pm.size());
  for (double eps : grid.epsilons) {
    RealFunction mag = cauchy_truncated_all(pm, f, eps).abs();
    out = out.max(mag);
  }
  return out;
}

std::vector<Cube> dedup_by_support(const DiscreteMeasure& mu,
                                   const std::vector<Cube>& cubes) {
  struct Sig {
    double side, mass;
    Eigen::Index first, count;
    bool operator==(const Sig&) const = default;
  };
  std::vector<Sig> seen;
  std::vector<Cube> out;
  for (const Cube& q : cubes) {
    Sig sig{q.side, 0.0, -1, 0};
    for_each_in_cube(mu, q, [&](Eigen::Index i) {
      if (sig.first < 0) sig.first = i;
      sig.mass += mu.mass(i);
      ++sig.count;
    });
    bool dup = false;
    for (const Sig& s : seen)
      if (s == sig) {
        dup = true;
        break;
      }
    if (!dup) {
      seen.push_back(sig);
      out.push_back(q);
    }
  }
  return out;
}

CommutatorDiagnostic commutator_sharp_diagnostic(const CubeFamily& family,
                                                 const RealFunction& b,
                                                 const ComplexFunction& f, double p,
                                                 const TruncationGrid& grid) {
  const DiscreteMeasure& mu = family.measure();
  PlanarMeasure pm(mu);
  const double eps = grid.epsilons.back();  // finest truncation for [b, T]
  RealFunction comm = commutator_all(pm, b, f, eps).abs();
  RealFunction fr = f.abs();
  RealFunction tf = cauchy_truncated_all(pm, f, eps).abs();

  CommutatorDiagnostic out;
  out.sharp_of_commutator = sharp_maximal_batch(family, comm);
  RealFunction m_f = p_maximal_batch(family, fr, p, 9.0 / 8.0);
  RealFunction m_tf = p_maximal_batch(family, tf, p, 1.5);
  RealFunction tstar = cauchy_star_all(pm, f, grid);
  out.majorant = m_f + m_tf + tstar;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (out.majorant[i] > 0.0)
      out.max_ratio = std::max(out.max_ratio,
                               out.sharp_of_commutator[i] / out.majorant[i]);
  return out;
}

CurvatureIdentity curvature_transform_identity(const PlanarMeasure& pm, const Cube& q,
                                               double eps, const RealFunction& a) {
  const auto& mu = pm.measure();
  std::vector<Eigen::Index> idx;
  for_each_in_cube(mu, q, [&](Eigen::Index i) { idx.push_back(i); });

  // chi_Q and a restricted to Q as functions on the full support.
  ComplexFunction chi = ComplexFunction::Zero(mu.size());
  ComplexFunction az = ComplexFunction::Zero(mu.size());
  for (Eigen::Index i : idx) {
    chi[i] = 1.0;
    az[i] = a[i];
  }

  double term2 = 0.0, term1 = 0.0;
  for (Eigen::Index i : idx) {
    std::complex<double> ca = cauchy_truncated(pm, az, eps, pm.z()[i]);
    std::complex<double> cchi = cauchy_truncated(pm, chi, eps, pm.z()[i]);
    term1 += std::norm(ca) * mu.mass(i);
    term2 += (az[i] * ca * std::conj(cchi)).real() * mu.mass(i);
  }
  CurvatureIdentity out;
  out.lhs = 2.0 * term1 + 4.0 * term2;
  out.rhs = curvature_triple_sum(pm, q, eps, &a);
  out.remainder = out.lhs - out.rhs;
  return out;
}

}  // namespace nonhom
