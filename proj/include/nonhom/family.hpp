#pragma once

#include <cstdint>
#include <vector>

#include "nonhom/cubes.hpp"
#include "nonhom/measure.hpp"

namespace nonhom {

/// How the finite cube family discretizing the suprema is built.
///
/// Sides are absolute dyadic lengths 2^j with r_min <= 2^j, up to a scale
/// swallowing the support; centers are a deterministic stride sample of the
/// support points. Optional random half-side shifts add off-support centers
/// (disabled by default so every cube is centered at a support point). The
/// reported suprema are certified lower bounds of the analytic ones.
struct FamilyOptions {
  int max_centers = 256;
  int cross_per_center = 4;   ///< cross-center pair partners per center
  int shifts = 0;             ///< extra shifted pseudo-centers
  std::uint64_t seed = 1;
  int max_levels = 64;        ///< safety cap on the dyadic ladder length
  /// Pairs with K above the regularity cap P0 carry no extra information in
  /// the mean-regularity sweeps; set false to keep them for cross-validation.
  bool restrict_pairs_to_p0 = true;
};

/// Index pair into CubeFamily::cubes() with its closeness coefficient.
struct PairRef {
  int inner = -1;
  int outer = -1;
  double k = 1.0;
};

/// Finite family of dyadic cubes centered at (sampled) support points,
/// closed under the doubling-companion map, together with nested pairs
/// restricted to K <= P0 and their doubling sub-list.
class CubeFamily {
 public:
  static CubeFamily build(const DiscreteMeasure& mu, const AnalysisContext& ctx,
                          const FamilyOptions& opt = {});

  const DiscreteMeasure& measure() const { return *mu_; }
  const AnalysisContext& context() const { return ctx_; }
  double p0() const { return p0_; }
  double beta_d() const { return beta_d_; }

  int size() const { return static_cast<int>(cubes_.size()); }
  const Cube& cube(int i) const { return cubes_[i]; }
  const std::vector<Cube>& cubes() const { return cubes_; }

  /// Index of the (2, beta_d)-doubling companion of cube i (itself when i is
  /// doubling). Companions are always members of the family.
  int companion(int i) const { return companion_[i]; }
  bool is_doubling_cube(int i) const { return doubling_[i]; }

  /// mu(Q_i), from the ladder cache; identical to cube_mass(mu, cube(i)).
  double mass_of(int i) const { return mass_[i]; }

  /// Nested pairs (not necessarily doubling) with K <= P0.
  const std::vector<PairRef>& all_pairs() const { return all_pairs_; }
  /// Pairs of (2, beta_d)-doubling cubes with K <= P0.
  const std::vector<PairRef>& doubling_pairs() const { return doubling_pairs_; }

  /// Cube indices containing the point x.
  std::vector<int> cubes_containing(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  const DiscreteMeasure* mu_ = nullptr;
  AnalysisContext ctx_;
  double p0_ = 0.0;
  double beta_d_ = 0.0;

  std::vector<Cube> cubes_;
  std::vector<double> mass_;
  std::vector<int> companion_;
  std::vector<char> doubling_;
  std::vector<PairRef> all_pairs_;
  std::vector<PairRef> doubling_pairs_;
};

}  // namespace nonhom
