#include "nonhom/family.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "nonhom/parallel.hpp"

namespace nonhom {

namespace {

struct Ladder {
  Eigen::VectorXd center;
  int j_sat = 0;                // level at which the cube swallows the support
  std::vector<double> mass;     // mass[j - j_min]
  std::vector<double> density;  // mass / side^n
};

}  // namespace

CubeFamily CubeFamily::build(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                             const FamilyOptions& opt) {
  CubeFamily fam;
  fam.mu_ = &mu;
  fam.ctx_ = ctx;
  fam.beta_d_ = effective_beta_d(mu, ctx);
  fam.p0_ = effective_p0(mu, ctx);

  const Eigen::Index n_pts = mu.size();
  const double diam = mu.support_diameter();

  const int j_min = dyadic_level_ceil(mu.r_min());
  const int j_core = std::max(j_min, dyadic_level_ceil(std::max(2.0 * diam, mu.r_min())));

  // Deterministic stride sample of support points as centers.
  std::vector<Eigen::Index> center_pts;
  {
    const Eigen::Index stride =
        std::max<Eigen::Index>(1, n_pts / std::max(1, opt.max_centers));
    for (Eigen::Index i = 0; i < n_pts; i += stride) center_pts.push_back(i);
  }

  std::mt19937_64 rng(opt.seed);
  std::vector<Ladder> ladders;
  ladders.reserve(center_pts.size() + opt.shifts);
  for (Eigen::Index i : center_pts) {
    Ladder lad;
    lad.center = mu.point(i);
    ladders.push_back(std::move(lad));
  }
  for (int s = 0; s < opt.shifts; ++s) {
    std::uniform_int_distribution<Eigen::Index> pick(0, n_pts - 1);
    std::uniform_int_distribution<int> lvl(j_min, j_core);
    std::uniform_int_distribution<int> dir(-1, 1);
    Ladder lad;
    lad.center = mu.point(pick(rng));
    const double half = std::ldexp(1.0, lvl(rng)) / 2.0;
    for (Eigen::Index t = 0; t < lad.center.size(); ++t)
      lad.center[t] += dir(rng) * half;
    ladders.push_back(std::move(lad));
  }

  // Dyadic mass ladders. The ladder extends one level past saturation so the
  // doubling test at the saturation level reads a cached value.
  int j_hi = j_core;
  for (auto& lad : ladders) {
    double r_inf = (mu.points().rowwise() - lad.center.transpose())
                       .cwiseAbs()
                       .maxCoeff();
    int j_sat = dyadic_level_ceil(std::max(2.0 * r_inf, mu.r_min()));
    j_sat = std::min(j_sat, j_min + opt.max_levels);
    lad.j_sat = j_sat;
    j_hi = std::max(j_hi, j_sat + 1);
  }
  j_hi = std::min(j_hi, j_min + opt.max_levels);

  const int levels = j_hi - j_min + 1;
  parallel::for_chunks(ladders.size(), [&](int, std::size_t b, std::size_t e) {
    for (std::size_t li = b; li < e; ++li) {
      Ladder& lad = ladders[li];
      lad.mass.resize(levels);
      lad.density.resize(levels);
      for (int j = j_min; j <= j_hi; ++j) {
        const double side = std::ldexp(1.0, j);
        double m;
        if (j > lad.j_sat) {
          m = mu.total_mass();  // cube swallows the support
        } else {
          m = cube_mass(mu, Cube(lad.center, side));
        }
        lad.mass[j - j_min] = m;
        lad.density[j - j_min] = m / std::pow(side, ctx.n);
      }
    }
  });

  // Doubling flags and companion levels per (center, level).
  const int n_centers = static_cast<int>(ladders.size());
  auto cube_at = [&](int c, int j) {
    return Cube(ladders[c].center, std::ldexp(1.0, j));
  };
  auto doubling_at = [&](int c, int j) {
    const auto& lad = ladders[c];
    double m = lad.mass[j - j_min];
    double md = (j + 1 <= j_hi) ? lad.mass[j + 1 - j_min] : mu.total_mass();
    if (m == 0.0) return md == 0.0;
    return md <= fam.beta_d_ * m;
  };
  auto companion_level = [&](int c, int j) {
    int k = j;
    while (k < j_hi && !doubling_at(c, k)) ++k;
    return k;  // at j_sat the mass is constant, hence doubling
  };

  // Family cubes: core grid plus companions (dedup by (center, level)).
  std::map<std::pair<int, int>, int> index_of;
  std::vector<std::pair<int, int>> key_of;  // id -> (center, level)
  auto add_cube = [&](int c, int j) {
    auto key = std::make_pair(c, j);
    auto it = index_of.find(key);
    if (it != index_of.end()) return it->second;
    int id = static_cast<int>(fam.cubes_.size());
    index_of.emplace(key, id);
    key_of.push_back(key);
    fam.cubes_.push_back(cube_at(c, j));
    fam.mass_.push_back(ladders[c].mass[j - j_min]);
    fam.doubling_.push_back(doubling_at(c, j));
    fam.companion_.push_back(-1);
    return id;
  };

  // Zero-mass cubes are excluded (possible for shifted pseudo-centers at
  // small levels); their dilates re-enter once they capture mass.
  for (int c = 0; c < n_centers; ++c)
    for (int j = j_min; j <= j_core; ++j)
      if (ladders[c].mass[j - j_min] > 0.0) add_cube(c, j);
  // Companions may add new levels above j_core; companions of doubling cubes
  // are the cubes themselves, so one growing pass closes the family.
  for (int id = 0; id < static_cast<int>(fam.cubes_.size()); ++id) {
    auto [c, j] = key_of[id];
    fam.companion_[id] = add_cube(c, companion_level(c, j));
  }

  // K between two family cubes sharing a center, summed in ascending dilate
  // order exactly as k_coeff does.
  auto k_concentric = [&](int c, int jq, int jr) {
    double acc = 1.0;
    for (int m = jq + 1; m <= jr; ++m) acc += ladders[c].density[m - j_min];
    return acc;
  };

  // Concentric pairs.
  for (int c = 0; c < n_centers; ++c) {
    for (int jq = j_min; jq <= j_hi; ++jq) {
      auto qit = index_of.find({c, jq});
      if (qit == index_of.end()) continue;
      for (int jr = jq + 1; jr <= j_hi; ++jr) {
        auto rit = index_of.find({c, jr});
        if (rit == index_of.end()) continue;
        double k = k_concentric(c, jq, jr);
        if (opt.restrict_pairs_to_p0 && k > fam.p0_) break;  // K grows outward
        PairRef pr{qit->second, rit->second, k};
        fam.all_pairs_.push_back(pr);
        if (fam.doubling_[pr.inner] && fam.doubling_[pr.outer])
          fam.doubling_pairs_.push_back(pr);
      }
    }
  }

  // Cross-center pairs: for each center a few partners; for each inner level
  // the smallest containing outer level at the partner.
  if (n_centers > 1 && opt.cross_per_center > 0) {
    std::uniform_int_distribution<int> pick(0, n_centers - 1);
    for (int c = 0; c < n_centers; ++c) {
      for (int t = 0; t < opt.cross_per_center; ++t) {
        int c2 = pick(rng);
        if (c2 == c) continue;
        const double off = (ladders[c].center - ladders[c2].center)
                               .cwiseAbs()
                               .maxCoeff();
        for (int jq = j_min; jq <= j_core; ++jq) {
          if (!index_of.count({c, jq})) continue;
          const double sq = std::ldexp(1.0, jq);
          int jr = jq;
          while (jr <= j_hi &&
                 (std::ldexp(1.0, jr) - sq) / 2.0 < off)
            ++jr;
          if (jr > j_hi) continue;
          auto rit = index_of.find({c2, jr});
          if (rit == index_of.end()) continue;
          // Dilates of the inner cube are concentric with it, so K reads off
          // the inner center's ladder regardless of the outer center.
          double k = k_concentric(c, jq, jr);
          if (opt.restrict_pairs_to_p0 && k > fam.p0_) continue;
          PairRef pr{index_of[{c, jq}], rit->second, k};
          fam.all_pairs_.push_back(pr);
          if (fam.doubling_[pr.inner] && fam.doubling_[pr.outer])
            fam.doubling_pairs_.push_back(pr);
        }
      }
    }
  }

  return fam;
}

std::vector<int> CubeFamily::cubes_containing(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (cubes_[i].contains(x)) out.push_back(i);
  return out;
}

}  // namespace nonhom
