#include "nonhom/norms.hpp"

#include <algorithm>
#include <cmath>

#include "nonhom/parallel.hpp"

namespace nonhom {

namespace {

// Per-cube sweep values computed chunk-parallel over the family; writes are
// independent per cube, so results do not depend on the thread count.
template <class Fn>
std::vector<double> per_cube(const CubeFamily& fam, Fn&& fn) {
  std::vector<double> v(fam.size());
  parallel::for_chunks(static_cast<std::size_t>(fam.size()),
                       [&](int, std::size_t b, std::size_t e) {
                         for (std::size_t i = b; i < e; ++i)
                           v[i] = fn(static_cast<int>(i));
                       });
  return v;
}

// Means of f over every family cube, one pass per cube.
std::vector<double> means_over_cubes(const CubeFamily& fam, const RealFunction& f) {
  const auto& mu = fam.measure();
  return per_cube(fam, [&](int i) {  // family cubes have positive mass
    CubeIntegral acc = integrate_on_cube(mu, f, fam.cube(i));
    return acc.weighted / acc.mass;
  });
}

double osc_integral(const DiscreteMeasure& mu, const RealFunction& f, const Cube& q,
                    double center_value) {
  double s = 0.0;
  for_each_in_cube(mu, q, [&](Eigen::Index i) {
    s += std::abs(f[i] - center_value) * mu.mass(i);
  });
  return s;
}

struct MaxTracker {
  double value = 0.0;
  int inner = -1, outer = -1;
  void offer(double v, int q, int r = -1) {
    if (v > value) {
      value = v;
      inner = q;
      outer = r;
    }
  }
};

NormReport finish(const CubeFamily& fam, const MaxTracker& osc, const MaxTracker& reg) {
  NormReport rep;
  rep.family_size = fam.size();
  rep.osc_component = osc.value;
  rep.reg_component = reg.value;
  const MaxTracker& best = reg.value > osc.value ? reg : osc;
  rep.value = best.value;
  if (best.inner >= 0) rep.witness_inner = fam.cube(best.inner);
  if (best.outer >= 0) {
    rep.witness_outer = fam.cube(best.outer);
    rep.witness_is_pair = true;
  }
  return rep;
}

}  // namespace

NormReport bmo_rho(const CubeFamily& family, const RealFunction& f, double rho) {
  if (family.size() == 0) fail(ErrorCode::EmptyFamily, "bmo_rho over empty family");
  const auto& mu = family.measure();
  std::vector<double> vals = per_cube(family, [&](int i) {
    const Cube& q = family.cube(i);
    CubeIntegral acc = integrate_on_cube(mu, f, q);
    double m_q = acc.weighted / acc.mass;
    return osc_integral(mu, f, q, m_q) / cube_mass(mu, q.dilated(rho));
  });
  MaxTracker osc;
  for (int i = 0; i < family.size(); ++i) osc.offer(vals[i], i);
  return finish(family, osc, MaxTracker{});
}

NormReport rbmo_star(const CubeFamily& family, const RealFunction& f) {
  if (family.size() == 0) fail(ErrorCode::EmptyFamily, "rbmo_star over empty family");
  const auto& mu = family.measure();
  const double rho = family.context().rho;
  std::vector<double> means = means_over_cubes(family, f);
  std::vector<double> vals = per_cube(family, [&](int i) {
    const Cube& q = family.cube(i);
    return osc_integral(mu, f, q, means[family.companion(i)]) /
           cube_mass(mu, q.dilated(rho));
  });
  MaxTracker osc, reg;
  for (int i = 0; i < family.size(); ++i) osc.offer(vals[i], i);
  for (const PairRef& pr : family.doubling_pairs())
    reg.offer(std::abs(means[pr.inner] - means[pr.outer]) / pr.k, pr.inner, pr.outer);
  return finish(family, osc, reg);
}

NormReport rbmo_doublestar(const CubeFamily& family, const RealFunction& f) {
  if (family.size() == 0)
    fail(ErrorCode::EmptyFamily, "rbmo_doublestar over empty family");
  const auto& mu = family.measure();
  const double rho = family.context().rho;
  std::vector<double> means = means_over_cubes(family, f);
  std::vector<double> vals = per_cube(family, [&](int i) {
    const Cube& q = family.cube(i);
    return osc_integral(mu, f, q, means[family.companion(i)]) /
           cube_mass(mu, q.dilated(rho));
  });
  MaxTracker osc, reg;
  for (int i = 0; i < family.size(); ++i) osc.offer(vals[i], i);
  for (const PairRef& pr : family.all_pairs()) {
    double fq = means[family.companion(pr.inner)];
    double fr = means[family.companion(pr.outer)];
    reg.offer(std::abs(fq - fr) / pr.k, pr.inner, pr.outer);
  }
  return finish(family, osc, reg);
}

NormReport circ_norm(const CubeFamily& family, const RealFunction& f) {
  if (family.size() == 0) fail(ErrorCode::EmptyFamily, "circ_norm over empty family");
  const auto& mu = family.measure();
  std::vector<double> med =
      per_cube(family, [&](int i) { return alpha_median(mu, f, family.cube(i)); });
  std::vector<double> vals = per_cube(family, [&](int i) {
    const Cube& q = family.cube(i);
    return osc_integral(mu, f, q, med[family.companion(i)]) /
           cube_mass(mu, q.dilated(2.0));
  });
  MaxTracker osc, reg;
  for (int i = 0; i < family.size(); ++i) osc.offer(vals[i], i);
  for (const PairRef& pr : family.doubling_pairs())
    reg.offer(std::abs(med[pr.inner] - med[pr.outer]) / pr.k, pr.inner, pr.outer);
  return finish(family, osc, reg);
}

NormReport rbmo_p(const CubeFamily& family, const RealFunction& f, double p) {
  if (p < 1.0) fail(ErrorCode::InvalidInput, "rbmo_p requires p >= 1");
  if (p == 1.0) return rbmo_star(family, f);
  if (family.size() == 0) fail(ErrorCode::EmptyFamily, "rbmo_p over empty family");
  const auto& mu = family.measure();
  const double rho = family.context().rho;
  std::vector<double> means = means_over_cubes(family, f);
  std::vector<double> vals = per_cube(family, [&](int i) {
    const Cube& q = family.cube(i);
    double c = means[family.companion(i)];
    double s = 0.0;
    for_each_in_cube(mu, q, [&](Eigen::Index j) {
      s += std::pow(std::abs(f[j] - c), p) * mu.mass(j);
    });
    return std::pow(s / cube_mass(mu, q.dilated(rho)), 1.0 / p);
  });
  MaxTracker osc, reg;
  for (int i = 0; i < family.size(); ++i) osc.offer(vals[i], i);
  for (const PairRef& pr : family.doubling_pairs())
    reg.offer(std::abs(means[pr.inner] - means[pr.outer]) / pr.k, pr.inner, pr.outer);
  return finish(family, osc, reg);
}

NormReport fifi_b_value(const CubeFamily& family, const RealFunction& f) {
  if (family.size() == 0) fail(ErrorCode::EmptyFamily, "fifi_b over empty family");
  const auto& mu = family.measure();
  const double rho = family.context().rho;
  std::vector<double> means = means_over_cubes(family, f);
  std::vector<double> dilate_ratio = per_cube(family, [&](int i) {
    return cube_mass(mu, family.cube(i).dilated(rho)) / family.mass_of(i);
  });
  std::vector<double> vals = per_cube(family, [&](int i) {
    const Cube& q = family.cube(i);
    return osc_integral(mu, f, q, means[i]) / cube_mass(mu, q.dilated(rho));
  });
  MaxTracker osc, reg;
  for (int i = 0; i < family.size(); ++i) osc.offer(vals[i], i);
  for (const PairRef& pr : family.all_pairs()) {
    double w = dilate_ratio[pr.inner] + dilate_ratio[pr.outer];
    reg.offer(std::abs(means[pr.inner] - means[pr.outer]) / (pr.k * w), pr.inner,
              pr.outer);
  }
  return finish(family, osc, reg);
}

double alpha_median(const DiscreteMeasure& mu, const RealFunction& f, const Cube& q) {
  thread_local std::vector<std::pair<double, double>> vals;  // (value, mass)
  vals.clear();
  double total = 0.0;
  for_each_in_cube(mu, q, [&](Eigen::Index i) {
    vals.emplace_back(f[i], mu.mass(i));
    total += mu.mass(i);
  });
  if (vals.empty()) fail(ErrorCode::EmptyCube, "median over a cube of zero mass");
  std::sort(vals.begin(), vals.end());
  const double half = total / 2.0;
  // below[j] = mu{f < v_j}; above[j] = mu{f > v_j} with ties merged.
  double below = 0.0;
  for (std::size_t j = 0; j < vals.size();) {
    std::size_t k = j;
    double tie = 0.0;
    while (k < vals.size() && vals[k].first == vals[j].first) tie += vals[k++].second;
    double above = total - below - tie;
    if (below <= half && above <= half) return vals[j].first;
    below += tie;
    j = k;
  }
  return vals.back().first;  // unreachable: the scan always finds a median
}

RealFunction truncate(const RealFunction& f, double q) {
  if (!(q > 0.0)) fail(ErrorCode::InvalidInput, "truncation height must be positive");
  return f.max(-q).min(q);
}

std::vector<std::pair<double, double>> jn_tail(const DiscreteMeasure& mu,
                                               const AnalysisContext& ctx,
                                               const RealFunction& f, const Cube& q,
                                               const std::vector<double>& lambdas) {
  if (cube_mass(mu, q) == 0.0) fail(ErrorCode::EmptyCube, "jn_tail over empty cube");
  Cube qt = doubling_companion(mu, ctx, q);
  double fq = mean(mu, f, qt);
  double denom = cube_mass(mu, q.dilated(ctx.rho));
  std::vector<std::pair<double, double>> rows;
  rows.reserve(lambdas.size());
  for (double lam : lambdas) {
    double m = 0.0;
    for_each_in_cube(mu, q, [&](Eigen::Index i) {
      if (std::abs(f[i] - fq) > lam) m += mu.mass(i);
    });
    rows.emplace_back(lam, m / denom);
  }
  return rows;
}

RealFunction block_function(const DiscreteMeasure& mu, const AtomicBlock& block) {
  RealFunction b = RealFunction::Zero(mu.size());
  for (const auto& piece : block.pieces) b += piece.lambda * piece.a;
  return b;
}

BlockValidation validate_block(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                               const AtomicBlock& block, double tol) {
  BlockValidation out;
  double h1 = 0.0;
  double l1_scale = 0.0;
  for (std::size_t j = 0; j < block.pieces.size(); ++j) {
    const auto& piece = block.pieces[j];
    if (piece.a.size() != mu.size()) {
      out.violations.push_back("piece " + std::to_string(j) +
                               ": wrong function length");
      continue;
    }
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      if (piece.a[i] != 0.0 && !piece.cube.contains(mu.point(i))) {
        out.violations.push_back("piece " + std::to_string(j) +
                                 ": support leaks outside its cube");
        break;
      }
    double sup = piece.a.abs().maxCoeff();
    if (!block.envelope.contains_cube(piece.cube)) {
      out.violations.push_back("piece " + std::to_string(j) +
                               ": inner cube not inside envelope");
    } else {
      double bound =
          1.0 / (cube_mass(mu, piece.cube.dilated(ctx.rho)) *
                 k_coeff(mu, ctx, NestedCubePair(piece.cube, block.envelope)));
      if (sup > bound * (1.0 + tol))
        out.violations.push_back("piece " + std::to_string(j) +
                                 ": sup norm exceeds the size bound");
    }
    h1 += std::abs(piece.lambda);
    l1_scale += std::abs(piece.lambda) * sup * cube_mass(mu, piece.cube);
  }
  RealFunction b = block_function(mu, block);
  double integral = (b * mu.masses().array()).sum();
  if (std::abs(integral) > tol * std::max(l1_scale, 1e-300))
    out.violations.push_back("nonzero integral");
  out.ok = out.violations.empty();
  out.h1 = out.ok ? h1 : 0.0;
  return out;
}

double pairing_check(const CubeFamily& family, const AtomicBlock& block,
                     const RealFunction& g) {
  const auto& mu = family.measure();
  BlockValidation v = validate_block(mu, family.context(), block);
  if (!v.ok) fail(ErrorCode::ValidationFailure, "pairing_check on invalid block");
  RealFunction b = block_function(mu, block);
  double pairing = std::abs((b * g * mu.masses().array()).sum());
  double gnorm = rbmo_star(family, g).value;
  if (gnorm == 0.0) {
    double scale = v.h1 * (g.abs().maxCoeff() + 1.0);
    if (pairing <= 1e-10 * scale) return 0.0;
    fail(ErrorCode::ZeroNorm, "pairing does not vanish although rbmo_star(g) = 0");
  }
  return pairing / (v.h1 * gnorm);
}

}  // namespace nonhom
