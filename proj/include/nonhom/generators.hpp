#pragma once

#include <cstdint>

#include "nonhom/measure.hpp"

namespace nonhom {

/// Built-in measures. All are planar (d = 2) with growth degree n = 1; the
/// one-dimensional ones sit on the real axis of the plane.

/// N equispaced points k/(N-1) on the segment [0, 1] x {0}, masses 1/N
/// (unit density at resolution r_min = 1/N).
DiscreteMeasure make_segment(int n_points);

/// N x N grid on [0, 1]^2 with planar Lebesgue weights 1/N^2, r_min = 1/N.
DiscreteMeasure make_square(int n_side);

/// Density 1 on [-2,-1] and [1,2], density eps on [-1/2,1/2], zero elsewhere,
/// discretized midpoint-per-cell at step h (cell mass = h * density), on the
/// real axis. r_min = h/2.
DiscreteMeasure make_eps_weighted(double h, double eps);

/// Four-corner Cantor set, generation G: the 4^G points
/// sum_{g=1..G} (3/4^g) (a_g, b_g), a_g, b_g in {0,1}, equal masses 4^-G,
/// r_min = 4^-G.
DiscreteMeasure make_cantor4(int generation);

/// Built-in functions on a measure's support.

/// eps^-1 (chi_[1/4,1/2] - chi_[-1/2,-1/4]) evaluated at the first coordinate.
RealFunction make_step_pair_function(const DiscreteMeasure& mu, double eps);

/// Seeded iid standard normal values.
RealFunction make_gaussian_function(const DiscreteMeasure& mu, std::uint64_t seed);

/// Seeded sum of a few Gaussian bumps centered at random support points;
/// smooth at the support scale, peaky in sup/L1 ratio.
RealFunction make_bumps_function(const DiscreteMeasure& mu, std::uint64_t seed,
                                 int n_bumps, double sigma_min, double sigma_max,
                                 double amplitude);

/// Single spike of the given height at support point 0, zero elsewhere.
RealFunction make_spike_function(const DiscreteMeasure& mu, double height);

/// Clustered random measure: sqrt(n) cluster centers in [0,1]^d with
/// log-uniform scatter radii and log-uniform masses. Deliberately far from
/// doubling; used by randomized sweeps.
DiscreteMeasure make_random_clusters(std::uint64_t seed, int n_points, int d);

}  // namespace nonhom
