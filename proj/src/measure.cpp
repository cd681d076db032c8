#include "nonhom/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "nonhom/parallel.hpp"

namespace nonhom {

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd points, Eigen::VectorXd masses,
                                 double r_min)
    : points_(std::move(points)), masses_(std::move(masses)), r_min_(r_min) {
  const Eigen::Index n = points_.rows();
  if (n == 0) fail(ErrorCode::InvalidInput, "measure has no support points");
  if (masses_.size() != n)
    fail(ErrorCode::InvalidInput, "masses/points length mismatch");
  if (!(r_min_ > 0.0)) fail(ErrorCode::InvalidInput, "r_min must be positive");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(masses_[i] > 0.0))
      fail(ErrorCode::InvalidInput, "masses must be strictly positive");

  order_by_x0_.resize(n);
  std::iota(order_by_x0_.begin(), order_by_x0_.end(), Eigen::Index{0});
  std::sort(order_by_x0_.begin(), order_by_x0_.end(),
            [&](Eigen::Index a, Eigen::Index b) {
              if (points_(a, 0) != points_(b, 0)) return points_(a, 0) < points_(b, 0);
              return a < b;
            });
  sorted_x0_.resize(n);
  x0_sorted_identity_ = true;
  for (Eigen::Index p = 0; p < n; ++p) {
    sorted_x0_[p] = points_(order_by_x0_[p], 0);
    if (order_by_x0_[p] != p) x0_sorted_identity_ = false;
  }

  // Pairwise-distinct check via the lexicographic order within equal-x0 runs.
  std::vector<Eigen::Index> run;
  for (Eigen::Index p = 0; p < n;) {
    Eigen::Index q = p;
    while (q < n && sorted_x0_[q] == sorted_x0_[p]) ++q;
    run.assign(order_by_x0_.begin() + p, order_by_x0_.begin() + q);
    std::sort(run.begin(), run.end(), [&](Eigen::Index a, Eigen::Index b) {
      for (Eigen::Index t = 1; t < points_.cols(); ++t)
        if (points_(a, t) != points_(b, t)) return points_(a, t) < points_(b, t);
      return false;
    });
    for (std::size_t j = 1; j < run.size(); ++j)
      if (points_.row(run[j]) == points_.row(run[j - 1]))
        fail(ErrorCode::InvalidInput, "support points must be pairwise distinct");
    p = q;
  }

  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += masses_[i];
  total_mass_ = s;
}

Eigen::Index DiscreteMeasure::find_point(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  auto lo = std::lower_bound(sorted_x0_.begin(), sorted_x0_.end(), x[0]);
  for (auto it = lo; it != sorted_x0_.end() && *it == x[0]; ++it) {
    Eigen::Index i = order_by_x0_[it - sorted_x0_.begin()];
    if (points_.row(i).transpose() == x) return i;
  }
  return -1;
}

void DiscreteMeasure::candidates_in_slab(double lo, double hi,
                                         std::vector<Eigen::Index>& out) const {
  out.clear();
  const auto b = std::lower_bound(sorted_x0_.begin(), sorted_x0_.end(), lo);
  const auto e = std::upper_bound(b, sorted_x0_.end(), hi);
  const Eigen::Index pb = b - sorted_x0_.begin(), pe = e - sorted_x0_.begin();
  out.reserve(pe - pb);
  if (x0_sorted_identity_) {
    for (Eigen::Index p = pb; p < pe; ++p) out.push_back(p);
  } else {
    for (Eigen::Index p = pb; p < pe; ++p) out.push_back(order_by_x0_[p]);
    std::sort(out.begin(), out.end());
  }
}

double DiscreteMeasure::support_diameter() const {
  {
    std::lock_guard lock(caches_->mutex);
    if (caches_->diameter >= 0.0) return caches_->diameter;
  }
  const Eigen::Index n = points_.rows();
  double best = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    double v = (points_.bottomRows(n - i - 1).rowwise() - points_.row(i))
                   .rowwise()
                   .norm()
                   .maxCoeff();
    best = std::max(best, v);
  }
  std::lock_guard lock(caches_->mutex);
  caches_->diameter = best;
  return best;
}

double DiscreteMeasure::enclosing_radius(Eigen::Index i) const {
  return (points_.rowwise() - points_.row(i)).cwiseAbs().maxCoeff();
}

double ball_mass(const DiscreteMeasure& mu, const Eigen::Ref<const Eigen::VectorXd>& x,
                 double r) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidInput, "ball radius must be positive");
  thread_local std::vector<Eigen::Index> scratch;
  mu.candidates_in_slab(x[0] - r, x[0] + r, scratch);
  const auto& pts = mu.points();
  const double r2 = r * r;
  double s = 0.0;
  for (Eigen::Index i : scratch) {
    double d2 = (pts.row(i).transpose() - x).squaredNorm();
    if (d2 <= r2) s += mu.mass(i);
  }
  return s;
}

double cube_mass(const DiscreteMeasure& mu, const Cube& q) {
  double s = 0.0;
  for_each_in_cube(mu, q, [&](Eigen::Index i) { s += mu.mass(i); });
  return s;
}

CubeIntegral integrate_on_cube(const DiscreteMeasure& mu, const RealFunction& f,
                               const Cube& q) {
  CubeIntegral acc;
  for_each_in_cube(mu, q, [&](Eigen::Index i) {
    acc.weighted += f[i] * mu.mass(i);
    acc.mass += mu.mass(i);
  });
  return acc;
}

double mean(const DiscreteMeasure& mu, const RealFunction& f, const Cube& q) {
  CubeIntegral acc = integrate_on_cube(mu, f, q);
  if (acc.mass == 0.0) fail(ErrorCode::EmptyCube, "mean over a cube of zero mass");
  return acc.weighted / acc.mass;
}

double support_diameter(const DiscreteMeasure& mu) { return mu.support_diameter(); }

namespace {

// Best candidate radii for one support point, by a distance-sorted sweep with
// prefix sums. The winners are re-evaluated through ball_mass so the returned
// constant certifies the public operation exactly.
void top_radii_for_point(const DiscreteMeasure& mu, Eigen::Index i, int n_exp,
                         std::vector<double>& out_radii) {
  const Eigen::Index n = mu.size();
  Eigen::VectorXd dist =
      (mu.points().rowwise() - mu.points().row(i)).rowwise().norm();
  thread_local std::vector<Eigen::Index> idx;
  idx.resize(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index a, Eigen::Index b) { return dist[a] < dist[b]; });

  struct Cand {
    double ratio;
    double r;
  };
  std::array<Cand, 8> top{};
  int filled = 0;
  auto offer = [&](double ratio, double r) {
    if (filled < static_cast<int>(top.size())) {
      top[filled++] = {ratio, r};
      std::sort(top.begin(), top.begin() + filled,
                [](const Cand& a, const Cand& b) { return a.ratio > b.ratio; });
    } else if (ratio > top.back().ratio) {
      top.back() = {ratio, r};
      std::sort(top.begin(), top.end(),
                [](const Cand& a, const Cand& b) { return a.ratio > b.ratio; });
    }
  };

  const double r_min = mu.r_min();
  double prefix = 0.0;
  Eigen::Index p = 0;
  // mass inside radius r_min first (closed ball)
  while (p < n && dist[idx[p]] <= r_min) prefix += mu.mass(idx[p]), ++p;
  offer(prefix / std::pow(r_min, n_exp), r_min);
  while (p < n) {
    const double r = dist[idx[p]];
    while (p < n && dist[idx[p]] == r) prefix += mu.mass(idx[p]), ++p;
    offer(prefix / std::pow(r, n_exp), r);
  }
  out_radii.clear();
  for (int k = 0; k < filled; ++k) out_radii.push_back(top[k].r);
}

}  // namespace

double growth_constant(const DiscreteMeasure& mu, const AnalysisContext& ctx) {
  {
    std::lock_guard lock(mu.caches_->mutex);
    auto it = mu.caches_->growth.find(ctx.n);
    if (it != mu.caches_->growth.end()) return it->second;
  }
  const Eigen::Index n = mu.size();
  if (n == 0) fail(ErrorCode::EmptySupport, "growth constant of empty measure");

  const int chunks = parallel::chunk_count(static_cast<std::size_t>(n));
  std::vector<double> chunk_best(chunks, 0.0);
  parallel::for_chunks(static_cast<std::size_t>(n),
                       [&](int c, std::size_t b, std::size_t e) {
                         std::vector<double> radii;
                         double best = 0.0;
                         for (std::size_t i = b; i < e; ++i) {
                           top_radii_for_point(mu, static_cast<Eigen::Index>(i),
                                               ctx.n, radii);
                           for (double r : radii) {
                             double v = ball_mass(mu, mu.point(i), r) /
                                        std::pow(r, ctx.n);
                             best = std::max(best, v);
                           }
                         }
                         chunk_best[c] = best;
                       });
  double c0 = 0.0;
  for (double v : chunk_best) c0 = std::max(c0, v);
  std::lock_guard lock(mu.caches_->mutex);
  mu.caches_->growth[ctx.n] = c0;
  return c0;
}

double effective_beta_d(const DiscreteMeasure& mu, const AnalysisContext& ctx) {
  if (ctx.beta_d > 0.0) return ctx.beta_d;
  return std::pow(2.0, mu.dimension() + 1);
}

double effective_p0(const DiscreteMeasure& mu, const AnalysisContext& ctx) {
  if (ctx.p0 > 0.0) return ctx.p0;
  double c0 = growth_constant(mu, ctx);
  return std::max(4.0, 8.0 * c0 * std::pow(2.0, ctx.n));
}

}  // namespace nonhom
