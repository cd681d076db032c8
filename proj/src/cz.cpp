#include "nonhom/cz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nonhom/maximal.hpp"

namespace nonhom {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index t = 0; t < a.size(); ++t) {
    if (a[t] != b[t]) return a[t] < b[t];
  }
  return false;
}

bool cubes_intersect(const Cube& a, const Cube& b) {
  const double gap = (a.side + b.side) / 2.0;
  for (Eigen::Index t = 0; t < a.center.size(); ++t)
    if (std::abs(a.center[t] - b.center[t]) > gap) return false;
  return true;
}

double p_integral_on_cube(const DiscreteMeasure& mu, const RealFunction& f,
                          const Cube& q, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for_each_in_cube(mu, q, [&](Eigen::Index i) { s += std::abs(f[i]) * mu.mass(i); });
  } else {
    for_each_in_cube(mu, q,
                     [&](Eigen::Index i) { s += std::pow(std::abs(f[i]), p) * mu.mass(i); });
  }
  return s;
}

}  // namespace

BesicovichSelection besicovich_cover(const std::vector<Cube>& candidates) {
  BesicovichSelection out;
  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (candidates[a].side != candidates[b].side)
      return candidates[a].side > candidates[b].side;
    if (candidates[a].center != candidates[b].center)
      return lex_less(candidates[a].center, candidates[b].center);
    return a < b;
  });
  for (int i : order) {
    bool covered = false;
    for (int s : out.selected)
      if (candidates[s].contains(candidates[i].center)) {
        covered = true;
        break;
      }
    if (!covered) out.selected.push_back(i);
  }
  for (const Cube& c : candidates) {
    int mult = 0;
    for (int s : out.selected)
      if (candidates[s].contains(c.center)) ++mult;
    out.max_overlap = std::max(out.max_overlap, mult);
  }
  return out;
}

StoppingCubes cz_stopping_cubes(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                                const RealFunction& f, double p, double lambda,
                                const CzOptions& opt) {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidInput, "lambda must be positive");
  if (p < 1.0) fail(ErrorCode::InvalidInput, "cz requires p >= 1");
  const double beta_d = effective_beta_d(mu, ctx);
  const double l1 = (f.abs() * mu.masses().array()).sum();
  if (!(lambda > beta_d * l1 / mu.total_mass()))
    fail(ErrorCode::InvalidInput,
         "lambda must exceed beta_d ||f||_1 / ||mu|| for a finite measure");

  std::vector<Eigen::Index> exceed;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (std::abs(f[i]) > lambda) exceed.push_back(i);

  StoppingCubes out;
  if (exceed.empty()) return out;  // |f| <= lambda everywhere: a valid outcome

  const double tau = std::pow(lambda, p) / beta_d;
  const int j_min = dyadic_level_ceil(mu.r_min());
  const int j_top = dyadic_level_ceil(std::max(2.0 * mu.support_diameter(), mu.r_min())) + 1;

  auto cc1_holds = [&](const Eigen::VectorXd& x, int j) {
    Cube q(x, std::ldexp(1.0, j));
    double num = p_integral_on_cube(mu, f, q, p);
    double den = cube_mass(mu, Cube(x, std::ldexp(1.0, j + 1)));
    return num / den > tau;
  };
  auto cc2_holds_at = [&](const Cube& q, double eta) {
    double num = p_integral_on_cube(mu, f, q.dilated(eta), p);
    double den = cube_mass(mu, q.dilated(2.0 * eta));
    return num / den <= tau;
  };

  // Largest dyadic level passing the density test, all larger levels failing.
  auto scan_level = [&](Eigen::Index i) {
    const Eigen::VectorXd x = mu.point(i);
    for (int j = j_top; j >= j_min; --j)
      if (cc1_holds(x, j)) return j;
    fail(ErrorCode::InvalidInput,
         "no stopping scale found; the measure is too coarse at this point");
  };

  std::vector<int> level(exceed.size());
  for (std::size_t e = 0; e < exceed.size(); ++e)
    level[e] = scan_level(exceed[e]);

  auto cube_of = [&](std::size_t e) {
    return Cube(mu.point(exceed[e]), std::ldexp(1.0, level[e]));
  };

  for (int round = 0;; ++round) {
    std::vector<Cube> cand(exceed.size());
    for (std::size_t e = 0; e < exceed.size(); ++e) cand[e] = cube_of(e);
    BesicovichSelection sel = besicovich_cover(cand);

    const bool last_round = round >= opt.max_repair_rounds;
    out.residual_eta.clear();
    for (int s : sel.selected) {
      for (;;) {
        std::vector<double> failing;
        for (double eta : opt.eta_grid)
          if (!cc2_holds_at(cube_of(s), eta)) failing.push_back(eta);
        if (failing.empty()) break;
        // Shrink to the next smaller dyadic level still passing the density
        // test; without one the violations stay on record.
        int j2 = last_round ? j_min - 1 : level[s] - 1;
        while (j2 >= j_min && !cc1_holds(mu.point(exceed[s]), j2)) --j2;
        if (j2 >= j_min) {
          level[s] = j2;
          ++out.shrink_steps;
        } else {
          for (double eta : failing) out.residual_eta.emplace_back(s, eta);
          break;
        }
      }
    }

    // cc3: every exceedance point must be covered by the shrunk selection.
    std::vector<char> covered(exceed.size(), 0);
    for (std::size_t e = 0; e < exceed.size(); ++e)
      for (int s : sel.selected)
        if (cube_of(s).contains(mu.point(exceed[e]))) {
          covered[e] = 1;
          break;
        }
    bool all_covered = std::all_of(covered.begin(), covered.end(),
                                   [](char c) { return c != 0; });
    if (all_covered || last_round) {
      if (!all_covered)
        fail(ErrorCode::InvalidInput,
             "stopping-cube repair did not converge; exceedance left uncovered");
      // Remap residual indices from candidate space to selected order.
      std::vector<std::pair<int, double>> res;
      for (auto [cand_idx, eta] : out.residual_eta) {
        auto it = std::find(sel.selected.begin(), sel.selected.end(), cand_idx);
        res.emplace_back(static_cast<int>(it - sel.selected.begin()), eta);
      }
      out.residual_eta = std::move(res);
      out.max_overlap = sel.max_overlap;
      out.cubes.clear();
      for (int s : sel.selected) out.cubes.push_back(cube_of(s));
      return out;
    }
    // Orphans keep their candidate cubes; with the shrunk winners in place
    // the next selection round picks them up.
  }
}

std::vector<Cube> cz_companions(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                                const std::vector<Cube>& cubes) {
  std::vector<Cube> out;
  out.reserve(cubes.size());
  const double beta6 = std::pow(6.0, ctx.n + 1);
  for (const Cube& q : cubes)
    out.push_back(doubling_companion_general(mu, q, 6.0, beta6, 1));
  return out;
}

PhiFamily cz_phi(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                 const RealFunction& f, const std::vector<Cube>& stopping,
                 const std::vector<Cube>& companions,
                 const std::vector<RealFunction>& weights, double lambda, double p) {
  (void)ctx;
  (void)p;
  const std::size_t m = stopping.size();
  if (companions.size() != m || weights.size() != m)
    fail(ErrorCode::InvalidInput, "cz_phi: mismatched family sizes");

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (companions[a].side != companions[b].side)
      return companions[a].side < companions[b].side;
    if (companions[a].center != companions[b].center)
      return lex_less(companions[a].center, companions[b].center);
    return a < b;
  });

  struct Built {
    std::vector<Eigen::Index> support;  // A_i, ascending
    double alpha = 0.0;
    double integral_abs = 0.0;  // int |phi_i|
  };
  std::vector<Built> built(m);
  std::vector<int> done;  // in construction order

  for (int k : order) {
    const Cube& rk = companions[k];
    std::vector<Eigen::Index> rk_points;
    double rk_mass = 0.0;
    for_each_in_cube(mu, rk, [&](Eigen::Index i) {
      rk_points.push_back(i);
      rk_mass += mu.mass(i);
    });
    if (rk_points.empty())
      fail(ErrorCode::DegenerateCompanion, "companion cube carries no mass");

    std::vector<int> overlap;
    double overlap_l1 = 0.0;
    for (int j : done)
      if (cubes_intersect(companions[j], rk)) {
        overlap.push_back(j);
        overlap_l1 += built[j].integral_abs;
      }
    const double t_k = 2.0 * overlap_l1 / rk_mass;

    // Running overlap burden at the points of R_k.
    std::vector<double> burden(rk_points.size(), 0.0);
    for (int j : overlap) {
      const double aj = std::abs(built[j].alpha);
      for (Eigen::Index idx : built[j].support) {
        auto it = std::lower_bound(rk_points.begin(), rk_points.end(), idx);
        if (it != rk_points.end() && *it == idx)
          burden[it - rk_points.begin()] += aj;
      }
    }

    Built b;
    double a_mass = 0.0;
    for (std::size_t t = 0; t < rk_points.size(); ++t)
      if (burden[t] <= t_k) {
        b.support.push_back(rk_points[t]);
        a_mass += mu.mass(rk_points[t]);
      }
    if (a_mass == 0.0)
      fail(ErrorCode::DegenerateCompanion,
           "Chebyshev set A_k has zero mass; cannot match the moment");

    double moment = 0.0;
    for_each_in_cube(mu, stopping[k], [&](Eigen::Index i) {
      moment += f[i] * weights[k][i] * mu.mass(i);
    });
    b.alpha = moment / a_mass;
    b.integral_abs = std::abs(b.alpha) * a_mass;
    built[k] = std::move(b);
    done.push_back(k);
  }

  PhiFamily out;
  out.phis.resize(m);
  RealFunction sum_abs = RealFunction::Zero(mu.size());
  for (std::size_t i = 0; i < m; ++i) {
    RealFunction phi = RealFunction::Zero(mu.size());
    for (Eigen::Index idx : built[i].support) phi[idx] = built[i].alpha;
    sum_abs += phi.abs();
    out.phis[i] = std::move(phi);
  }
  out.b_used = sum_abs.size() > 0 ? sum_abs.maxCoeff() / lambda : 0.0;
  return out;
}

CzDecomposition cz_decompose(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                             const RealFunction& f, double p, double lambda,
                             const CzOptions& opt) {
  CzDecomposition dec;
  dec.lambda = lambda;
  dec.p = p;

  StoppingCubes stop = cz_stopping_cubes(mu, ctx, f, p, lambda, opt);
  dec.stopping_cubes = stop.cubes;
  dec.max_overlap = stop.max_overlap;
  dec.shrink_steps = stop.shrink_steps;
  dec.residual_eta = stop.residual_eta;

  const std::size_t m = dec.stopping_cubes.size();
  if (m == 0) {
    dec.good = f;
    dec.good_sup = f.size() ? f.abs().maxCoeff() : 0.0;
    return dec;
  }

  dec.companions = cz_companions(mu, ctx, dec.stopping_cubes);

  // Fractional weights: points covered by several stopping cubes split evenly.
  Eigen::ArrayXi cover = Eigen::ArrayXi::Zero(mu.size());
  for (const Cube& q : dec.stopping_cubes)
    for_each_in_cube(mu, q, [&](Eigen::Index i) { cover[i] += 1; });
  dec.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    RealFunction w = RealFunction::Zero(mu.size());
    for_each_in_cube(mu, dec.stopping_cubes[i],
                     [&](Eigen::Index j) { w[j] = 1.0 / cover[j]; });
    dec.weights[i] = std::move(w);
  }

  PhiFamily phi = cz_phi(mu, ctx, f, dec.stopping_cubes, dec.companions,
                         dec.weights, lambda, p);
  dec.phis = std::move(phi.phis);
  dec.b_used = phi.b_used;

  const double pprime = p > 1.0 ? p / (p - 1.0) : 0.0;
  RealFunction bad_total = RealFunction::Zero(mu.size());
  double cc4_res = 0.0, cc6_c = 0.0, h1 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Cube& qi = dec.stopping_cubes[i];
    const Cube& ri = dec.companions[i];
    RealFunction fw = f * dec.weights[i];
    RealFunction piece = fw - dec.phis[i];
    bad_total += piece;

    // cc4: moment matching.
    double mom_fw = (fw * mu.masses().array()).sum();
    double mom_phi = (dec.phis[i] * mu.masses().array()).sum();
    cc4_res = std::max(cc4_res, std::abs(mom_phi - mom_fw) /
                                    std::max(std::abs(mom_fw), 1e-300));

    // cc6 certificate (p > 1 only).
    if (p > 1.0) {
      double phi_p = std::pow(p_integral_on_cube(mu, dec.phis[i], ri, p), 1.0 / p);
      double lhs = phi_p * std::pow(cube_mass(mu, ri), 1.0 / pprime);
      double rhs = std::pow(lambda, 1.0 - p) * p_integral_on_cube(mu, f, qi, p);
      if (rhs > 0.0) cc6_c = std::max(cc6_c, lhs / rhs);
    }

    // Atomic block with the two inner cubes Q_i and R_i.
    AtomicBlock block;
    block.envelope = ri;
    double k_qr = k_coeff(mu, ctx, NestedCubePair(qi, ri));
    double sup_fw = fw.abs().maxCoeff();
    if (sup_fw > 0.0) {
      AtomicBlock::Piece pc;
      pc.cube = qi;
      double bound = 1.0 / (cube_mass(mu, qi.dilated(ctx.rho)) * k_qr);
      pc.lambda = sup_fw / bound;
      pc.a = fw / pc.lambda;
      block.pieces.push_back(std::move(pc));
    }
    double sup_phi = dec.phis[i].abs().maxCoeff();
    if (sup_phi > 0.0) {
      AtomicBlock::Piece pc;
      pc.cube = ri;
      double bound = 1.0 / cube_mass(mu, ri.dilated(ctx.rho));  // K_{R,R} = 1
      pc.lambda = sup_phi / bound;
      pc.a = -dec.phis[i] / pc.lambda;
      block.pieces.push_back(std::move(pc));
    }
    BlockValidation v = validate_block(mu, ctx, block, 1e-12);
    if (!v.ok) {
      dec.blocks_valid = false;
      for (const auto& s : v.violations)
        dec.block_violations.push_back("block " + std::to_string(i) + ": " + s);
    }
    dec.bad_blocks.push_back(std::move(block));

    // p-block certificate for the H^{1,p} upper bound.
    double lam1 = lp_norm(mu, fw, p) * std::pow(cube_mass(mu, qi.dilated(ctx.rho)),
                                                p > 1.0 ? 1.0 / pprime : 0.0) *
                  k_qr;
    double lam2 = lp_norm(mu, dec.phis[i], p) *
                  std::pow(cube_mass(mu, ri.dilated(ctx.rho)),
                           p > 1.0 ? 1.0 / pprime : 0.0);
    h1 += lam1 + lam2;
  }
  dec.cc4_residual = cc4_res;
  dec.cc6_constant = cc6_c;
  dec.h1_upper = h1;

  dec.good = f - bad_total;
  dec.good_sup = dec.good.abs().maxCoeff();

  RealFunction recon = dec.good + bad_total;
  double fmax = std::max(f.abs().maxCoeff(), 1e-300);
  dec.reconstruction_residual = (recon - f).abs().maxCoeff() / fmax;

  double fp = lp_norm(mu, f, p);
  dec.cc7_ratio = dec.h1_upper * std::pow(lambda, p - 1.0) / std::pow(fp, p);
  return dec;
}

}  // namespace nonhom
